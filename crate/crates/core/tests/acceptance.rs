//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adlv_core::adlv::{decide, emptiness_table, Decider, Rule, Status};
use adlv_core::conj::BranchPolicy;
use adlv_core::geom::{
    enumerate_gpieces, gpiece_closure_contains, specialize_labels, steinberg_boundary, GPieceLabel, Label,
    SpecializeMode,
};
use adlv_core::oracle::{
    elements_in_box, elements_in_orbit_box, kpieces_bruteforce, orbit_oracle,
    word_length_oracle,
};
use adlv_core::pieces::{bxb_meets_gpiece, key2_reduce, PieceSolver};
use adlv_core::{AffineElt, AffineWeylGroup, CartanType, Coweight, NodeSet, WeylGroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2010;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn aff(kind: CartanType, rank: usize) -> AffineWeylGroup {
    AffineWeylGroup::from_type(kind, rank).unwrap()
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, v: &'a [T]) -> &'a T {
    &v[rng.gen_range(0..v.len())]
}

fn golden_pgl4() -> Outcome {
    let start = Instant::now();
    let g = aff(CartanType::A, 3);
    let fin = g.finite();
    let rs = g.root_system();
    let lambda = Coweight::new(vec![0, 628, 628]);
    let in_x = rs.coroot_coords(&lambda).unwrap() == Some(vec![471, 942, 785]);
    let qr = rs.is_quasi_regular(&lambda).unwrap() == (true, 625);

    let x = fin.parse_word("s2 s1 s3 s2").unwrap();
    let y = fin.parse_word("s3 s2").unwrap();
    let a = g.compose(&x, &lambda, &y).unwrap();
    let v = decide(&g, &a).unwrap();
    let verdict = v.status == Status::Empty && v.rule == Rule::Main2Empty;

    let expect = g.compose(&y, &lambda, &fin.identity()).unwrap();
    let pieces = PieceSolver::new(&g).kpieces(&a).unwrap();
    let piece_ok = pieces.members == vec![expect];

    let j = NodeSet::singleton(0);
    let mut solver = PieceSolver::new(&g);
    let mut hits = Vec::new();
    for w in fin.min_coset_reps(j).unwrap() {
        if bxb_meets_gpiece(&mut solver, j, &x, &y, &w, &lambda).unwrap() {
            hits.push(fin.format(&w));
        }
    }
    let bxb_ok = hits == ["s3 s2"];
    let elapsed = start.elapsed();
    outcome(
        in_x && qr && verdict && piece_ok && bxb_ok && elapsed < Duration::from_secs(5),
        format!(
            "lambda in X: {in_x}, quasi-regular (625): {qr}, verdict {}/{}, pieces {:?}, bxb hits {hits:?}, {elapsed:.2?}",
            v.status,
            v.rule,
            pieces.members.iter().map(|m| g.format(m)).collect::<Vec<_>>()
        ),
    )
}

fn length_formula() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut pass = true;
    for (kind, rank, len) in [(CartanType::A, 2, 8), (CartanType::C, 2, 8), (CartanType::A, 3, 6)] {
        let r = word_length_oracle(&aff(kind, rank), len).unwrap();
        pass &= r.passed();
        parts.push(format!("{kind}{rank} len<={len}: {} elements, {} mismatches", r.instance_count, r.mismatches.len()));
    }
    let elapsed = start.elapsed();
    outcome(pass && elapsed < Duration::from_secs(120), format!("{}; {elapsed:.2?}", parts.join("; ")))
}

fn minimality() -> Outcome {
    let mut instances = 0;
    let mut distinct = 0;
    let mut bad = 0;
    for (kind, rank) in [(CartanType::A, 2), (CartanType::C, 2)] {
        let g = aff(kind, rank);
        let mut seen = HashSet::new();
        for a in elements_in_box(&g, 3).unwrap() {
            let d = orbit_oracle(&g, &a).unwrap();
            instances += 1;
            if d.min_length_set != d.bruhat_min_set {
                bad += 1;
            }
            if !seen.contains(&a) {
                distinct += 1;
                seen.extend(d.orbit);
            }
        }
    }
    outcome(
        instances >= 500 && bad == 0,
        format!("{instances} orbit computations ({distinct} distinct orbits), {bad} mismatches"),
    )
}

fn kpieces_vs_bruteforce() -> Outcome {
    let start = Instant::now();
    let g = aff(CartanType::A, 2);
    let elements = elements_in_orbit_box(&g, 2, 10).unwrap();
    let mut bad = 0;
    for policy in [BranchPolicy::SmallestIndex, BranchPolicy::LargestIndex] {
        let mut solver = PieceSolver::with_policy(&g, policy);
        for a in &elements {
            let fast: BTreeSet<AffineElt> = solver.kpieces(a).unwrap().members.into_iter().collect();
            if fast != kpieces_bruteforce(&g, a).unwrap() {
                bad += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad == 0 && !elements.is_empty() && elapsed < Duration::from_secs(300),
        format!("{} elements x 2 policies, {bad} mismatches, {elapsed:.2?}", elements.len()),
    )
}

/// Three distinct dominant coweights with face exactly `j`.
fn lambdas_for_face(rng: &mut ChaCha8Rng, rank: usize, j: NodeSet) -> Vec<Coweight> {
    let mut out: Vec<Coweight> = Vec::new();
    while out.len() < 3 {
        let c: Vec<i64> = (0..rank).map(|i| if j.contains(i) { 0 } else { rng.gen_range(1..=700) }).collect();
        let c = Coweight::new(c);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

fn lambda_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut instances = 0;
    let mut bad = 0;
    let mut hits = 0;
    for (kind, rank) in [(CartanType::A, 2), (CartanType::A, 3)] {
        let g = aff(kind, rank);
        let fin = g.finite();
        let faces: Vec<NodeSet> = NodeSet::all_subsets(rank).into_iter().filter(|j| *j != fin.all_nodes()).collect();
        let elements = fin.elements().unwrap();
        let mut solver = PieceSolver::new(&g);
        for _ in 0..25 {
            let j = *pick(&mut rng, &faces);
            let reps = fin.min_coset_reps(j).unwrap();
            let x = pick(&mut rng, &reps).clone();
            let y = pick(&mut rng, &elements).clone();
            let w = pick(&mut rng, &reps).clone();
            let lambdas = lambdas_for_face(&mut rng, rank, j);
            let answers: Vec<bool> = lambdas
                .iter()
                .map(|l| bxb_meets_gpiece(&mut solver, j, &x, &y, &w, l).unwrap())
                .collect();
            instances += 1;
            hits += usize::from(answers[0]);
            if answers.iter().any(|&b| b != answers[0]) {
                bad += 1;
            }
        }
    }
    outcome(
        instances == 50 && bad == 0,
        format!("{instances} instances x 3 lambdas ({hits} meet), {bad} lambda-dependent"),
    )
}

fn table_conformance() -> Outcome {
    let g = aff(CartanType::A, 2);
    let fin = g.finite();
    let s = fin.all_nodes();
    let lambda = Coweight::new(vec![64, 64]);
    let rs = g.root_system();
    let pre = rs.in_coroot_lattice(&lambda) && rs.is_quasi_regular(&lambda).unwrap().0;
    let table = emptiness_table(&g, &lambda).unwrap();
    let j = rs.i_lambda(&lambda).unwrap();
    let wj = fin.parabolic_elements(j).unwrap();
    let mut solver = PieceSolver::new(&g);
    let mut decider = Decider::new(&g);
    let (mut cells, mut lemma_bad, mut inv_checked, mut inv_bad) = (0, 0, 0, 0);
    for (x, row) in table.rows.iter().zip(&table.cells) {
        for (y, v) in table.cols.iter().zip(row) {
            cells += 1;
            let a = g.compose(x, &lambda, y).unwrap();
            let p = solver.kpieces(&a).unwrap();
            let full = p.members.iter().any(|m| fin.supp(&m.fin) == s);
            let z = fin.mul(&fin.inv(y), x);
            let small = fin.supp(&z) != s;
            let all_full = wj.iter().all(|u| fin.supp(&fin.mul(&fin.mul(u, &z), &fin.inv(u))) == s);
            let empty = v.status == Status::Empty;
            if empty == full || (small && full) || (all_full && !full) || v.status == Status::Inconclusive {
                lemma_bad += 1;
            }
            let vi = decider.decide(&g.inv(&a).unwrap()).unwrap();
            if v.is_conclusive() && vi.is_conclusive() {
                inv_checked += 1;
                if vi.status != v.status {
                    inv_bad += 1;
                }
            }
        }
    }
    outcome(
        pre && cells == 36 && lemma_bad == 0 && inv_bad == 0,
        format!(
            "lambda (64,64): {cells} cells, {lemma_bad} lemma violations, {inv_checked} inverse pairs, {inv_bad} asymmetric"
        ),
    )
}

fn key2_postconditions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let (mut inputs, mut bad, mut moved) = (0, 0, 0);
    for (kind, rank) in [(CartanType::A, 2), (CartanType::A, 3)] {
        let g = aff(kind, rank);
        let fin = g.finite();
        let rs = g.root_system();
        let s = fin.all_nodes();
        let faces: Vec<NodeSet> = NodeSet::all_subsets(rank).into_iter().filter(|j| *j != s).collect();
        let elements = fin.elements().unwrap();
        let mut taken = 0;
        while taken < 50 {
            let j = *pick(&mut rng, &faces);
            let reps = fin.min_coset_reps(j).unwrap();
            let x = pick(&mut rng, &reps).clone();
            let y = pick(&mut rng, &elements).clone();
            let z = fin.mul(&fin.inv(&y), &x);
            if !fin.is_min_coset_rep(&z, j) || fin.supp(&z) != s {
                continue;
            }
            let bound = rs.regularity_bound(j.len() + 1).unwrap();
            let lambda = Coweight::new(
                (0..rank)
                    .map(|i| if j.contains(i) { 0 } else { bound + rng.gen_range(0..=500) })
                    .collect(),
            );
            let step = key2_reduce(&g, j, &x, &y, &lambda).unwrap();
            taken += 1;
            inputs += 1;
            moved += usize::from(!step.v.is_identity());
            if !step.postconditions_hold() {
                bad += 1;
            }
        }
    }
    outcome(
        inputs == 100 && bad == 0,
        format!("{inputs} inputs ({moved} with v != e), {bad} violations"),
    )
}

fn is_partial_order(wg: &WeylGroup, labels: &[GPieceLabel]) -> bool {
    let n = labels.len();
    let m: Vec<Vec<bool>> = labels
        .iter()
        .map(|a| labels.iter().map(|b| gpiece_closure_contains(wg, a, b).unwrap()).collect())
        .collect();
    (0..n).all(|i| m[i][i])
        && (0..n).all(|i| (0..n).all(|j| i == j || !(m[i][j] && m[j][i])))
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(m[i][j] && m[j][k]) || m[i][k])))
}

fn compactification_counts() -> Outcome {
    let a1 = WeylGroup::from_type(CartanType::A, 1).unwrap();
    let a2 = WeylGroup::from_type(CartanType::A, 2).unwrap();
    let (p1, p2) = (enumerate_gpieces(&a1).unwrap(), enumerate_gpieces(&a2).unwrap());
    let (b1, b2) = (steinberg_boundary(&a1).unwrap(), steinberg_boundary(&a2).unwrap());
    let orders = is_partial_order(&a1, &p1) && is_partial_order(&a2, &p2);
    outcome(
        p1.len() == 3 && p2.len() == 13 && b1.len() == 1 && b2.len() == 5 && orders,
        format!(
            "pieces A1 {} A2 {}, boundary A1 {} A2 {}, partial order: {orders}",
            p1.len(),
            p2.len(),
            b1.len(),
            b2.len()
        ),
    )
}

fn relabeling() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for rank in [2, 3] {
        let g = aff(CartanType::A, rank);
        let fin = g.finite();
        let all: HashSet<GPieceLabel> = enumerate_gpieces(fin).unwrap().into_iter().collect();
        let mut image = HashSet::new();
        for j in NodeSet::all_subsets(rank) {
            let lambda = Coweight::new((0..rank).map(|i| if j.contains(i) { 0 } else { 3 + i as i64 }).collect());
            let neg_w0 = fin.act(fin.longest(), &lambda).unwrap().checked_neg().unwrap();
            if g.root_system().i_lambda(&neg_w0).unwrap() != fin.delta_set(j) {
                bad.push(format!("I(-w0 lambda) != delta(J) for J = {j}"));
            }
            for x in fin.min_coset_reps(j).unwrap() {
                checked += 1;
                if fin.star(&fin.star(&x)) != x {
                    bad.push(format!("star not involutive at {}", fin.format(&x)));
                }
                let w = g.compose(&x, &lambda, &fin.identity()).unwrap();
                let nf = g.normalize(&w).unwrap();
                match specialize_labels(fin, &nf, SpecializeMode::KPiece).unwrap() {
                    Label::GPiece(l) if l.j == fin.delta_set(j) && all.contains(&l) => {
                        if !image.insert(l) {
                            bad.push(format!("collision at ({j}, {})", fin.format(&x)));
                        }
                    }
                    other => bad.push(format!("bad label {other:?}")),
                }
            }
        }
        if image != all {
            bad.push(format!("A{rank}: image has {} of {} labels", image.len(), all.len()));
        }
    }
    outcome(bad.is_empty(), format!("{checked} parameters (J, x) in A2, A3; problems: {bad:?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("worked PGL4 example", golden_pgl4),
        ("length formula vs word oracle", length_formula),
        ("length-minimal = Bruhat-minimal on orbits", minimality),
        ("kpieces vs brute force, two policies", kpieces_vs_bruteforce),
        ("lambda-independence of B x B / piece incidence", lambda_independence),
        ("support lemmas and inverse symmetry on A2 table", table_conformance),
        ("key2 reduction postconditions", key2_postconditions),
        ("compactification label counts and closure order", compactification_counts),
        ("piece relabeling bijection", relabeling),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
