//! Which `K`-stable pieces `K_w`, `w` in `W~^S`, meet `K . I a I`.
//!
//! The recursion: if the `~S`-class of `a` is minimal, the answer is the
//! class label of `a`. Otherwise take `w1 ~S a` and `i` with
//! `l(s_i w1 s_i) < l(w1)` and return the union of the answers for `s_i w1`
//! and `s_i w1 s_i`. Both are strictly shorter, and every element visited
//! keeps its translation part in the `W`-orbit of the source's, so the memo
//! holds at most `|W|^2` keys.
//!
//! For elements outside the shape `x e^(-lambda) y^-1` with `I(lambda) = J`
//! the output is a combinatorial piece set only.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::afweyl::{AffineElt, AffineWeylGroup};
use crate::conj::{approx_class, leq_s, minimal_shape, strict_drop, BranchPolicy};
use crate::error::{Error, Result};
use crate::rootsys::{Coweight, NodeSet};
use crate::weyl::WeylElt;

pub const PIECES_SCHEMA: &str = "adlv.pieces/1";
pub const KEY2_SCHEMA: &str = "adlv.key2/1";

#[derive(Debug, Clone)]
enum Expansion {
    Base(AffineElt),
    Branch { node: usize, left: AffineElt, conj: AffineElt },
}

/// The answer for one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceSet {
    pub source: AffineElt,
    /// Sorted by finite part in ShortLex, then by translation.
    pub members: Vec<AffineElt>,
    pub memo_size: usize,
    pub trace_digest: String,
}

impl PieceSet {
    pub fn contains(&self, w: &AffineElt) -> bool {
        self.members.contains(w)
    }
}

/// Memoizing solver; reuse one across calls to share the table.
pub struct PieceSolver<'g> {
    g: &'g AffineWeylGroup,
    policy: BranchPolicy,
    memo: HashMap<AffineElt, Arc<BTreeSet<AffineElt>>>,
    expansions: HashMap<AffineElt, Expansion>,
}

impl<'g> PieceSolver<'g> {
    pub fn new(g: &'g AffineWeylGroup) -> PieceSolver<'g> {
        PieceSolver::with_policy(g, BranchPolicy::SmallestIndex)
    }

    pub fn with_policy(g: &'g AffineWeylGroup, policy: BranchPolicy) -> PieceSolver<'g> {
        PieceSolver {
            g,
            policy,
            memo: HashMap::new(),
            expansions: HashMap::new(),
        }
    }

    pub fn group(&self) -> &'g AffineWeylGroup {
        self.g
    }

    pub fn memo_size(&self) -> usize {
        self.memo.len()
    }

    pub fn kpieces(&mut self, a: &AffineElt) -> Result<PieceSet> {
        let set = self.solve(a)?;
        let mut members: Vec<AffineElt> = set.iter().cloned().collect();
        let w = self.g.finite();
        members.sort_by(|p, q| w.shortlex_cmp(&p.fin, &q.fin).then_with(|| p.trans.cmp(&q.trans)));
        Ok(PieceSet {
            source: a.clone(),
            members,
            memo_size: self.memo.len(),
            trace_digest: self.digest(a),
        })
    }

    fn expand(&mut self, a: &AffineElt) -> Result<Expansion> {
        if let Some(e) = self.expansions.get(a) {
            return Ok(e.clone());
        }
        let g = self.g;
        let class = approx_class(g, a, self.policy)?;
        let exp = match strict_drop(g, &class, self.policy)? {
            Some((k, i)) => {
                let w1 = &class.members[k];
                Expansion::Branch {
                    node: i,
                    left: g.left_simple(i, w1),
                    conj: g.conj_simple(i, w1)?,
                }
            }
            None => {
                let shape = minimal_shape(g, &class)?.ok_or_else(|| {
                    Error::Invariant(format!("minimal class of {} has no v*w1 member", g.format(a)))
                })?;
                Expansion::Base(shape.w1)
            }
        };
        self.expansions.insert(a.clone(), exp.clone());
        Ok(exp)
    }

    fn solve(&mut self, root: &AffineElt) -> Result<Arc<BTreeSet<AffineElt>>> {
        if let Some(s) = self.memo.get(root) {
            return Ok(s.clone());
        }
        let orbit_rep = self.g.normalize(root)?.lambda;
        let mut stack = vec![root.clone()];
        while let Some(a) = stack.last().cloned() {
            if self.memo.contains_key(&a) {
                stack.pop();
                continue;
            }
            match self.expand(&a)? {
                Expansion::Base(w1) => {
                    self.memo.insert(a, Arc::new(BTreeSet::from([w1])));
                    stack.pop();
                }
                Expansion::Branch { left, conj, .. } => {
                    let pending: Vec<AffineElt> = [&left, &conj]
                        .into_iter()
                        .filter(|c| !self.memo.contains_key(*c))
                        .cloned()
                        .collect();
                    if pending.is_empty() {
                        let mut set: BTreeSet<AffineElt> = (*self.memo[&left]).clone();
                        set.extend(self.memo[&conj].iter().cloned());
                        self.memo.insert(a, Arc::new(set));
                        stack.pop();
                    } else {
                        for c in pending {
                            if self.g.normalize(&c)?.lambda != orbit_rep {
                                return Err(Error::Invariant(format!(
                                    "{} left the translation orbit of {}",
                                    self.g.format(&c),
                                    self.g.format(root)
                                )));
                            }
                            stack.push(c);
                        }
                    }
                }
            }
        }
        Ok(self.memo[root].clone())
    }

    /// SHA-256 over the branch decisions reachable from `a`, in DFS order.
    fn digest(&self, a: &AffineElt) -> String {
        let mut hasher = Sha256::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![a.clone()];
        while let Some(cur) = stack.pop() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            let line = match self.expansions.get(&cur) {
                Some(Expansion::Base(w1)) => {
                    format!("{} => {}\n", self.g.format(&cur), self.g.format(w1))
                }
                Some(Expansion::Branch { node, left, conj }) => {
                    stack.push(conj.clone());
                    stack.push(left.clone());
                    format!("{} / s{}\n", self.g.format(&cur), node + 1)
                }
                None => format!("{} memo\n", self.g.format(&cur)),
            };
            hasher.update(line.as_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// One-shot `kpieces` with a fresh memo.
pub fn kpieces(g: &AffineWeylGroup, a: &AffineElt) -> Result<PieceSet> {
    PieceSolver::new(g).kpieces(a)
}

fn check_face(g: &AffineWeylGroup, j: NodeSet, lambda: &Coweight) -> Result<()> {
    let face = g.root_system().i_lambda(lambda)?;
    if face != j {
        return Err(Error::Precondition(format!("I({lambda}) = {face}, expected {j}")));
    }
    Ok(())
}

/// Whether `[J, x, y]` meets `Z_{J, w}`, decided as
/// `w e^(-lambda)` in `kpieces(x e^(-lambda) y^-1)`.
pub fn bxb_meets_gpiece(
    solver: &mut PieceSolver<'_>,
    j: NodeSet,
    x: &WeylElt,
    y: &WeylElt,
    w: &WeylElt,
    lambda: &Coweight,
) -> Result<bool> {
    let g = solver.group();
    check_face(g, j, lambda)?;
    let fin = g.finite();
    for (name, e) in [("x", x), ("w", w)] {
        if !fin.is_min_coset_rep(e, j) {
            return Err(Error::Precondition(format!("{name} = {} is not in W^{j}", fin.format(e))));
        }
    }
    let a = g.compose(x, lambda, y)?;
    let target = g.compose(w, lambda, &fin.identity())?;
    Ok(solver.kpieces(&a)?.contains(&target))
}

/// Whether `K_{w'}` lies in the closure of `K_w`.
pub fn kpiece_closure_contains(g: &AffineWeylGroup, w: &AffineElt, w_prime: &AffineElt) -> Result<bool> {
    for e in [w, w_prime] {
        if !g.is_s_minimal(e)? {
            return Err(Error::Precondition(format!("{} is not in W~^S", g.format(e))));
        }
    }
    leq_s(g, w_prime, w)
}

/// Outcome of the closure-free reduction step on `(J, x, y, lambda)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Key2Step {
    pub m: i64,
    pub mu: Coweight,
    pub v: WeylElt,
    pub gamma: Coweight,
    pub gamma_face: NodeSet,
    pub x_new: WeylElt,
    pub checks: Key2Checks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Key2Checks {
    /// `<mu, alpha> >= M` for every positive root outside `J`.
    pub b: bool,
    /// `I(gamma)` strictly inside `J`.
    pub c: bool,
    /// `<gamma, alpha_i> >= bound(|I(gamma)| + 1)` off `I(gamma)`.
    pub d: bool,
    /// `x_new` in `W^{I(gamma)}` with full support.
    pub e: bool,
    /// `v` in `W_J` and in `W^{I(gamma)}`.
    pub v_shape: bool,
}

impl Key2Step {
    /// `(b)` always; `(c)`-`(e)` are claimed only when `v` is not the identity.
    pub fn postconditions_hold(&self) -> bool {
        let c = &self.checks;
        c.b && c.v_shape && (self.v.is_identity() || (c.c && c.d && c.e))
    }
}

pub fn key2_reduce(
    g: &AffineWeylGroup,
    j: NodeSet,
    x: &WeylElt,
    y: &WeylElt,
    lambda: &Coweight,
) -> Result<Key2Step> {
    let rs = g.root_system();
    let fin = g.finite();
    let s = fin.all_nodes();
    check_face(g, j, lambda)?;
    if !fin.is_min_coset_rep(x, j) {
        return Err(Error::Precondition(format!("x = {} is not in W^{j}", fin.format(x))));
    }
    let z = fin.mul(&fin.inv(y), x);
    if !fin.is_min_coset_rep(&z, j) || fin.supp(&z) != s {
        return Err(Error::Precondition(format!(
            "y^-1 x = {} must lie in W^{j} with full support",
            fin.format(&z)
        )));
    }
    let outer = rs.regularity_bound(j.len() + 1)?;
    for i in j.complement(rs.rank()).iter() {
        if lambda.coords()[i] < outer {
            return Err(Error::Precondition(format!(
                "<lambda, alpha_{}> = {} is below {outer}",
                i + 1,
                lambda.coords()[i]
            )));
        }
    }

    let m = rs.regularity_bound(j.len())?;
    let shift = rs.rho_vee(j.complement(rs.rank())).checked_scale(m)?;
    let mu = lambda.checked_sub(&shift)?.checked_add(&fin.act(&z, &shift)?)?;
    let (gamma, v) = fin.dominant_with_witness(&mu)?;
    let gamma_face = rs.i_lambda(&gamma)?;
    let vinv = fin.inv(&v);
    let x_new = fin.mul(&fin.mul(&vinv, &z), &v);

    let mut b = true;
    for k in 0..rs.num_positive() {
        if !rs.root_in_parabolic(k, j) && rs.pair(&mu, k)? < m {
            b = false;
        }
    }
    let c = gamma_face.is_subset(j) && gamma_face != j;
    let inner = rs.regularity_bound(gamma_face.len() + 1)?;
    let d = gamma_face
        .complement(rs.rank())
        .iter()
        .all(|i| gamma.coords()[i] >= inner);
    let e = fin.is_min_coset_rep(&x_new, gamma_face) && fin.supp(&x_new) == s;
    let v_shape = fin.in_parabolic(&v, j) && fin.is_min_coset_rep(&v, gamma_face);
    Ok(Key2Step {
        m,
        mu,
        v,
        gamma,
        gamma_face,
        x_new,
        checks: Key2Checks { b, c, d, e, v_shape },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceSetDoc {
    pub schema: String,
    pub root_system: String,
    pub source: String,
    pub members: Vec<String>,
    pub full_support: Vec<bool>,
    pub memo_size: usize,
    pub trace_digest: String,
}

impl PieceSetDoc {
    pub fn new(g: &AffineWeylGroup, p: &PieceSet) -> PieceSetDoc {
        let s = g.finite().all_nodes();
        PieceSetDoc {
            schema: PIECES_SCHEMA.into(),
            root_system: g.root_system().label(),
            source: g.format(&p.source),
            members: p.members.iter().map(|m| g.format(m)).collect(),
            full_support: p.members.iter().map(|m| g.finite().supp(&m.fin) == s).collect(),
            memo_size: p.memo_size,
            trace_digest: p.trace_digest.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Key2Doc {
    pub schema: String,
    pub root_system: String,
    pub m: i64,
    pub mu: Coweight,
    pub v: String,
    pub gamma: Coweight,
    pub gamma_face: String,
    pub x_new: String,
    pub checks: Key2Checks,
    pub holds: bool,
}

impl Key2Doc {
    pub fn new(g: &AffineWeylGroup, k: &Key2Step) -> Key2Doc {
        Key2Doc {
            schema: KEY2_SCHEMA.into(),
            root_system: g.root_system().label(),
            m: k.m,
            mu: k.mu.clone(),
            v: g.finite().format(&k.v),
            gamma: k.gamma.clone(),
            gamma_face: k.gamma_face.to_string(),
            x_new: g.finite().format(&k.x_new),
            checks: k.checks,
            holds: k.postconditions_hold(),
        }
    }
}
