//! Brute-force cross-checks for the formula-based fast paths.
//!
//! Nothing here is used by the decider. Each check enumerates its objects from
//! definitions (group words, full orbits, every branch of a recursion) and
//! reports mismatches against the fast implementation.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adlv::{Decider, Rule};
use crate::afweyl::{AffineElt, AffineWeylGroup};
use crate::conj::{classify, leq_s, BranchPolicy};
use crate::error::{Error, Result};
use crate::pieces::PieceSolver;
use crate::rootsys::{CartanType, Coweight};

pub const REPORT_SCHEMA: &str = "adlv.oracle-report/1";

/// Largest rank the oracles accept.
pub const ORACLE_MAX_RANK: usize = 3;
/// Longest words the length oracle enumerates.
pub const ORACLE_MAX_WORD: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema: String,
    pub check_name: String,
    pub instance_count: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    pub fn new(check_name: impl Into<String>) -> OracleReport {
        OracleReport {
            schema: REPORT_SCHEMA.into(),
            check_name: check_name.into(),
            instance_count: 0,
            mismatches: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub(crate) fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instance_count += 1;
        if !ok {
            self.mismatches.push(detail());
        }
    }
}

fn guard_rank(g: &AffineWeylGroup, what: &str) -> Result<()> {
    if g.rank() > ORACLE_MAX_RANK && !g.finite().guard_lifted() {
        return Err(Error::Guard(format!(
            "{what} oracle limited to rank <= {ORACLE_MAX_RANK}"
        )));
    }
    Ok(())
}

/// Every element of `W_a` of word length at most `max_len`, with its BFS depth.
pub fn words_by_depth(g: &AffineWeylGroup, max_len: usize) -> Result<HashMap<AffineElt, usize>> {
    let mut depth: HashMap<AffineElt, usize> = HashMap::from([(g.identity(), 0)]);
    let mut frontier = vec![g.identity()];
    let gens: Vec<AffineElt> = g.letters().map(|l| g.letter(l)).collect();
    for d in 1..=max_len {
        let mut next = Vec::new();
        for a in &frontier {
            for s in &gens {
                let b = g.mul(s, a)?;
                if !depth.contains_key(&b) {
                    depth.insert(b.clone(), d);
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    Ok(depth)
}

/// Compares the length formula with BFS depth over the generators `S~`.
pub fn word_length_oracle(g: &AffineWeylGroup, max_len: usize) -> Result<OracleReport> {
    guard_rank(g, "word length")?;
    if max_len > ORACLE_MAX_WORD && !g.finite().guard_lifted() {
        return Err(Error::Guard(format!(
            "word length oracle limited to length <= {ORACLE_MAX_WORD}"
        )));
    }
    let mut report = OracleReport::new(format!(
        "word_length/{}/len<={max_len}",
        g.root_system().label()
    ));
    let depth = words_by_depth(g, max_len)?;
    let mut items: Vec<(&AffineElt, &usize)> = depth.iter().collect();
    items.sort();
    for (a, &d) in items {
        let l = g.length(a)?;
        report.record(l == d as u64, || {
            format!("{}: formula {l}, word depth {d}", g.format(a))
        });
    }
    Ok(report)
}

/// Every element below `b` in Bruhat order, as subword products of a
/// reduced word of `b`.
pub fn bruhat_ideal(g: &AffineWeylGroup, b: &AffineElt) -> Result<HashSet<AffineElt>> {
    let (word, tau) = g.reduced_word(b)?;
    let mut ideal: HashSet<AffineElt> = HashSet::from([g.identity()]);
    for l in word {
        let s = g.letter(l);
        let extra: Vec<AffineElt> = ideal.iter().map(|p| g.mul(p, &s)).collect::<Result<_>>()?;
        ideal.extend(extra);
    }
    ideal.into_iter().map(|p| g.mul(&p, &tau)).collect()
}

/// The `W`-conjugation orbit of `a` and its two kinds of minimal elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitData {
    pub orbit: BTreeSet<AffineElt>,
    pub min_length_set: BTreeSet<AffineElt>,
    pub bruhat_min_set: BTreeSet<AffineElt>,
}

pub fn conjugation_orbit(g: &AffineWeylGroup, a: &AffineElt) -> Result<BTreeSet<AffineElt>> {
    let mut orbit = BTreeSet::from([a.clone()]);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(b) = queue.pop_front() {
        for i in 0..g.rank() {
            let c = g.conj_simple(i, &b)?;
            if orbit.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    Ok(orbit)
}

pub fn orbit_oracle(g: &AffineWeylGroup, a: &AffineElt) -> Result<OrbitData> {
    guard_rank(g, "orbit")?;
    let orbit = conjugation_orbit(g, a)?;
    let mut lengths = Vec::with_capacity(orbit.len());
    for b in &orbit {
        lengths.push(g.length(b)?);
    }
    let min_len = lengths.iter().copied().min().unwrap_or(0);
    let min_length_set = orbit
        .iter()
        .zip(&lengths)
        .filter(|(_, &l)| l == min_len)
        .map(|(b, _)| b.clone())
        .collect();
    let mut bruhat_min_set = BTreeSet::new();
    for b in &orbit {
        let below = bruhat_ideal(g, b)?;
        if !orbit.iter().any(|c| c != b && below.contains(c)) {
            bruhat_min_set.insert(b.clone());
        }
    }
    Ok(OrbitData {
        orbit,
        min_length_set,
        bruhat_min_set,
    })
}

/// The `w` in `W~^S` with `a` in `W . (w W_{I(S, w)})`, read off the whole orbit.
pub fn classify_by_definition(g: &AffineWeylGroup, a: &AffineElt) -> Result<AffineElt> {
    let s = g.finite().all_nodes();
    let mut label: Option<AffineElt> = None;
    for b in conjugation_orbit(g, a)? {
        let (w1, v) = g.split_s(&b)?;
        if g.finite().in_parabolic(&v, g.relative_i(s, &w1)?) {
            match &label {
                None => label = Some(w1),
                Some(prev) if *prev != w1 => {
                    return Err(Error::Invariant(format!(
                        "{} lies in [{}] and [{}]",
                        g.format(a),
                        g.format(prev),
                        g.format(&w1)
                    )))
                }
                _ => {}
            }
        }
    }
    label.ok_or_else(|| Error::Invariant(format!("{} lies in no class", g.format(a))))
}

/// `w <=_S w'` straight from the definition.
pub fn leq_s_bruteforce(g: &AffineWeylGroup, w: &AffineElt, w_prime: &AffineElt) -> Result<bool> {
    let data = orbit_oracle(g, w)?;
    let below = bruhat_ideal(g, w_prime)?;
    Ok(data.min_length_set.iter().any(|v| below.contains(v)))
}

/// Longest element the brute-force piece search accepts.
pub const BRUTEFORCE_MAX_LENGTH: u64 = 40;

/// `kpieces` exploring every admissible branch at every step.
pub fn kpieces_bruteforce(g: &AffineWeylGroup, a: &AffineElt) -> Result<BTreeSet<AffineElt>> {
    guard_rank(g, "piece")?;
    if g.length(a)? > BRUTEFORCE_MAX_LENGTH && !g.finite().guard_lifted() {
        return Err(Error::Guard(format!(
            "piece oracle limited to length <= {BRUTEFORCE_MAX_LENGTH}"
        )));
    }
    let mut memo: HashMap<AffineElt, BTreeSet<AffineElt>> = HashMap::new();
    bruteforce_rec(g, a, &mut memo)
}

fn bruteforce_rec(
    g: &AffineWeylGroup,
    a: &AffineElt,
    memo: &mut HashMap<AffineElt, BTreeSet<AffineElt>>,
) -> Result<BTreeSet<AffineElt>> {
    if let Some(s) = memo.get(a) {
        return Ok(s.clone());
    }
    let len = g.length(a)?;
    let mut class = BTreeSet::from([a.clone()]);
    let mut todo = vec![a.clone()];
    while let Some(b) = todo.pop() {
        for i in 0..g.rank() {
            let c = g.conj_simple(i, &b)?;
            if g.length(&c)? == len && class.insert(c.clone()) {
                todo.push(c);
            }
        }
    }
    let mut branches = Vec::new();
    for b in &class {
        for i in 0..g.rank() {
            if g.length(&g.conj_simple(i, b)?)? < len {
                branches.push((i, b.clone()));
            }
        }
    }
    let out = if branches.is_empty() {
        BTreeSet::from([classify_by_definition(g, a)?])
    } else {
        let mut out = BTreeSet::new();
        for (i, b) in branches {
            out.extend(bruteforce_rec(g, &g.left_simple(i, &b), memo)?);
            out.extend(bruteforce_rec(g, &g.conj_simple(i, &b)?, memo)?);
        }
        out
    };
    for b in class {
        memo.insert(b, out.clone());
    }
    Ok(out)
}

/// Default seed for the randomized checks.
pub const DEFAULT_SEED: u64 = 20_100_603;

/// All `u e^chi` with `chi` in the box `[-bound, bound]^rank`.
pub fn elements_in_box(g: &AffineWeylGroup, bound: i64) -> Result<Vec<AffineElt>> {
    let mut coords: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..g.rank() {
        coords = coords
            .into_iter()
            .flat_map(|c| {
                (-bound..=bound).map(move |v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for u in g.finite().elements()? {
        for c in &coords {
            let t = g.translation(Coweight::new(c.clone()))?;
            out.push(g.mul(&g.from_finite(u.clone()), &t)?);
        }
    }
    Ok(out)
}

/// All `u e^chi` with `chi` in the `W`-orbit of a dominant coweight with
/// coordinates at most `bound`, of length at most `max_len`.
pub fn elements_in_orbit_box(g: &AffineWeylGroup, bound: i64, max_len: u64) -> Result<Vec<AffineElt>> {
    let fin = g.finite();
    let mut dominant: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..g.rank() {
        dominant = dominant
            .into_iter()
            .flat_map(|c| {
                (0..=bound).map(move |v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    let elements = fin.elements()?;
    let mut trans = BTreeSet::new();
    for c in dominant {
        let lambda = Coweight::new(c);
        for u in &elements {
            trans.insert(fin.act(u, &lambda)?);
        }
    }
    let mut out = Vec::new();
    for u in &elements {
        for chi in &trans {
            let a = g.mul(&g.from_finite(u.clone()), &g.translation(chi.clone())?)?;
            if g.length(&a)? <= max_len {
                out.push(a);
            }
        }
    }
    Ok(out)
}

/// Length-minimal and Bruhat-minimal elements agree on every orbit meeting
/// the translation box; one orbit computation per element of the box.
pub fn minimality_check(g: &AffineWeylGroup, bound: i64) -> Result<OracleReport> {
    let mut report = OracleReport::new(format!("orbit_minimality/{}/box<={bound}", g.root_system().label()));
    for a in elements_in_box(g, bound)? {
        let d = orbit_oracle(g, &a)?;
        report.record(d.min_length_set == d.bruhat_min_set, || {
            format!("orbit of {}: minimal sets differ", g.format(&a))
        });
    }
    Ok(report)
}

pub fn classify_check(g: &AffineWeylGroup, bound: i64) -> Result<OracleReport> {
    let mut report = OracleReport::new(format!("classify/{}/box<={bound}", g.root_system().label()));
    for a in elements_in_box(g, bound)? {
        let fast = classify(g, &a)?;
        let slow = classify_by_definition(g, &a)?;
        report.record(fast == slow, || {
            format!("{}: fast {}, definition {}", g.format(&a), g.format(&fast), g.format(&slow))
        });
    }
    Ok(report)
}

pub fn kpieces_check(g: &AffineWeylGroup, bound: i64, max_len: u64) -> Result<OracleReport> {
    let mut report = OracleReport::new(format!(
        "kpieces/{}/orbit<={bound}/len<={max_len}",
        g.root_system().label()
    ));
    let mut solvers = [
        PieceSolver::with_policy(g, BranchPolicy::SmallestIndex),
        PieceSolver::with_policy(g, BranchPolicy::LargestIndex),
    ];
    for a in elements_in_orbit_box(g, bound, max_len)? {
        let slow = kpieces_bruteforce(g, &a)?;
        for solver in solvers.iter_mut() {
            let fast: BTreeSet<AffineElt> = solver.kpieces(&a)?.members.into_iter().collect();
            report.record(fast == slow, || format!("{}: piece sets differ", g.format(&a)));
        }
    }
    Ok(report)
}

/// `leq_s` against the definition on `W~^S` elements with small translation.
pub fn leq_s_check(g: &AffineWeylGroup, bound: i64) -> Result<OracleReport> {
    let mut report = OracleReport::new(format!("leq_s/{}/box<={bound}", g.root_system().label()));
    let mut reps = Vec::new();
    for a in elements_in_box(g, bound)? {
        if g.is_s_minimal(&a)? {
            reps.push(a);
        }
    }
    for w in &reps {
        for w2 in &reps {
            let fast = leq_s(g, w, w2)?;
            let slow = leq_s_bruteforce(g, w, w2)?;
            report.record(fast == slow, || {
                format!("{} <=_S {}: fast {fast}, definition {slow}", g.format(w), g.format(w2))
            });
        }
    }
    Ok(report)
}

/// Every `Main2Empty` verdict on small tables carries the brute-force piece set.
pub fn certificate_check(g: &AffineWeylGroup, lambdas: &[Coweight]) -> Result<OracleReport> {
    let mut report = OracleReport::new(format!("empty_certificates/{}", g.root_system().label()));
    let fin = g.finite();
    let mut decider = Decider::new(g);
    for lambda in lambdas {
        let j = g.root_system().i_lambda(lambda)?;
        for x in fin.min_coset_reps(j)? {
            for y in fin.elements()? {
                let a = g.compose(&x, lambda, &y)?;
                let v = decider.decide(&a)?;
                if v.rule != Rule::Main2Empty {
                    continue;
                }
                let slow: Vec<String> = kpieces_bruteforce(g, &a)?.iter().map(|m| g.format(m)).collect();
                let mut listed = v.evidence.pieces.clone().unwrap_or_default();
                listed.sort();
                let mut slow = slow;
                slow.sort();
                report.record(listed == slow, || format!("{}: certificate differs", g.format(&a)));
            }
        }
    }
    Ok(report)
}

/// Random elements: minimal sets agree on their orbits.
pub fn random_minimality_check(g: &AffineWeylGroup, count: usize, bound: i64, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements = g.finite().elements()?;
    let mut report = OracleReport::new(format!(
        "orbit_minimality_random/{}/n={count}/seed={seed}",
        g.root_system().label()
    ));
    for _ in 0..count {
        let u = elements[rng.gen_range(0..elements.len())].clone();
        let chi: Vec<i64> = (0..g.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
        let a = g.mul(&g.from_finite(u), &g.translation(Coweight::new(chi))?)?;
        let d = orbit_oracle(g, &a)?;
        report.record(d.min_length_set == d.bruhat_min_set, || {
            format!("orbit of {}: minimal sets differ", g.format(&a))
        });
    }
    Ok(report)
}

/// Runs the standard oracle battery; `deep` widens every range.
pub fn selfcheck(deep: bool, seed: u64) -> Result<Vec<OracleReport>> {
    let a2 = AffineWeylGroup::from_type(CartanType::A, 2)?;
    let c2 = AffineWeylGroup::from_type(CartanType::C, 2)?;
    let mut out = vec![
        word_length_oracle(&a2, 8)?,
        word_length_oracle(&c2, 8)?,
        minimality_check(&a2, if deep { 3 } else { 2 })?,
        random_minimality_check(&a2, 200, 4, seed)?,
        classify_check(&a2, 2)?,
        kpieces_check(&a2, if deep { 2 } else { 1 }, if deep { 10 } else { 8 })?,
        leq_s_check(&a2, 1)?,
        certificate_check(&a2, &[Coweight::new(vec![1, 1]), Coweight::new(vec![3, 0])])?,
    ];
    if deep {
        let a3 = AffineWeylGroup::from_type(CartanType::A, 3)?;
        let g2 = AffineWeylGroup::from_type(CartanType::G, 2)?;
        out.push(word_length_oracle(&a3, 6)?);
        out.push(word_length_oracle(&g2, 8)?);
        out.push(minimality_check(&c2, 3)?);
        out.push(classify_check(&c2, 2)?);
        out.push(kpieces_check(&c2, 1, 10)?);
    }
    Ok(out)
}
