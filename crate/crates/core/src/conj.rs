//! Partial conjugation of `W` on `W~`.
//!
//! Only the finite simple reflections `s_i`, `i` in `S`, are used to
//! conjugate; `s0` never is. A step `a -> s_i a s_i` is admissible when it
//! does not increase length. Length-preserving steps are reversible and
//! generate the equivalence `~S`; a strictly decreasing step drops length by 2.
//!
//! Every element reaches a minimal-length element of its `W`-orbit this way,
//! and some element of that minimal `~S`-class has the shape `v w1` with `w1`
//! in `W~^S` and `v` in `W_{I(S, w1)}`. The class label of `a` is that `w1`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::afweyl::{AffineElt, AffineWeylGroup};
use crate::error::{Error, Result};
use crate::weyl::WeylElt;

pub const TRACE_SCHEMA: &str = "adlv.trace/1";

/// Order in which simple reflections are tried, and which end of the BFS
/// order wins when several branches are admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BranchPolicy {
    #[default]
    SmallestIndex,
    LargestIndex,
}

impl BranchPolicy {
    pub(crate) fn order(self, rank: usize) -> Vec<usize> {
        match self {
            BranchPolicy::SmallestIndex => (0..rank).collect(),
            BranchPolicy::LargestIndex => (0..rank).rev().collect(),
        }
    }
}

/// A `~S`-class, in BFS order from its entry element.
#[derive(Debug, Clone)]
pub struct ApproxClass {
    pub members: Vec<AffineElt>,
    /// `parent[k] = Some((p, i))`: `members[k] = s_i members[p] s_i`.
    pub parent: Vec<Option<(usize, usize)>>,
    pub length: u64,
}

impl ApproxClass {
    /// Conjugation steps leading from the entry element to `members[k]`.
    pub fn path_to(&self, k: usize) -> Vec<(usize, usize)> {
        let mut path = Vec::new();
        let mut cur = k;
        while let Some((p, i)) = self.parent[cur] {
            path.push((i, cur));
            cur = p;
        }
        path.reverse();
        path
    }
}

pub fn approx_class(g: &AffineWeylGroup, a: &AffineElt, policy: BranchPolicy) -> Result<ApproxClass> {
    let length = g.length(a)?;
    let order = policy.order(g.rank());
    let mut members = vec![a.clone()];
    let mut parent = vec![None];
    let mut index: HashMap<AffineElt, usize> = HashMap::from([(a.clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for &i in &order {
            let b = g.conj_simple(i, &members[k])?;
            if index.contains_key(&b) || g.length(&b)? != length {
                continue;
            }
            index.insert(b.clone(), members.len());
            queue.push_back(members.len());
            members.push(b);
            parent.push(Some((k, i)));
        }
    }
    Ok(ApproxClass {
        members,
        parent,
        length,
    })
}

/// First member (in BFS order) admitting a strictly length-reducing
/// conjugation, with the reflection used.
pub fn strict_drop(
    g: &AffineWeylGroup,
    class: &ApproxClass,
    policy: BranchPolicy,
) -> Result<Option<(usize, usize)>> {
    let order = policy.order(g.rank());
    for (k, m) in class.members.iter().enumerate() {
        for &i in &order {
            if g.length(&g.conj_simple(i, m)?)? < class.length {
                return Ok(Some((k, i)));
            }
        }
    }
    Ok(None)
}

/// The decomposition `m = v w1` of a member of a minimal class, if one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalShape {
    pub member: usize,
    pub w1: AffineElt,
    pub v: WeylElt,
}

pub fn minimal_shape(g: &AffineWeylGroup, class: &ApproxClass) -> Result<Option<MinimalShape>> {
    let s = g.finite().all_nodes();
    for (k, m) in class.members.iter().enumerate() {
        let (w1, right) = g.split_s(m)?;
        let face = g.relative_i(s, &w1)?;
        if g.finite().in_parabolic(&right, face) {
            // m = w1 right = (w1 right w1^-1) w1, and w1 normalises W_face
            let v = g.mul(m, &g.inv(&w1)?)?;
            debug_assert!(v.trans.is_zero());
            return Ok(Some(MinimalShape {
                member: k,
                w1,
                v: v.fin,
            }));
        }
    }
    Ok(None)
}

/// One admissible conjugation `a -> s_i a s_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjStep {
    pub node: usize,
    pub result: AffineElt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalizationTrace {
    pub source: AffineElt,
    pub steps: Vec<ConjStep>,
    pub result: AffineElt,
    pub class_rep: AffineElt,
    pub v_part: WeylElt,
}

/// Conjugates `a` down to a minimal-length element of its `W`-orbit.
///
/// Alternates between exploring the current `~S`-class and taking a strict
/// drop; once no drop exists the class is minimal and is searched for the
/// `v w1` shape.
pub fn reduce_to_minimal(g: &AffineWeylGroup, a: &AffineElt) -> Result<MinimalizationTrace> {
    reduce_with_policy(g, a, BranchPolicy::SmallestIndex)
}

pub fn reduce_with_policy(
    g: &AffineWeylGroup,
    a: &AffineElt,
    policy: BranchPolicy,
) -> Result<MinimalizationTrace> {
    let mut steps = Vec::new();
    let mut cur = a.clone();
    loop {
        let class = approx_class(g, &cur, policy)?;
        match strict_drop(g, &class, policy)? {
            Some((k, i)) => {
                for (node, idx) in class.path_to(k) {
                    steps.push(ConjStep {
                        node,
                        result: class.members[idx].clone(),
                    });
                }
                cur = g.conj_simple(i, &class.members[k])?;
                steps.push(ConjStep {
                    node: i,
                    result: cur.clone(),
                });
            }
            None => {
                let shape = minimal_shape(g, &class)?.ok_or_else(|| {
                    Error::Invariant(format!(
                        "minimal class of {} has no v*w1 member",
                        g.format(&cur)
                    ))
                })?;
                for (node, idx) in class.path_to(shape.member) {
                    steps.push(ConjStep {
                        node,
                        result: class.members[idx].clone(),
                    });
                }
                return Ok(MinimalizationTrace {
                    source: a.clone(),
                    steps,
                    result: class.members[shape.member].clone(),
                    class_rep: shape.w1,
                    v_part: shape.v,
                });
            }
        }
    }
}

/// Re-checks a trace step by step without trusting how it was produced.
pub fn verify_trace(g: &AffineWeylGroup, t: &MinimalizationTrace) -> Result<bool> {
    let mut cur = t.source.clone();
    let mut len = g.length(&cur)?;
    for step in &t.steps {
        if step.node >= g.rank() {
            return Ok(false);
        }
        let next = g.conj_simple(step.node, &cur)?;
        let nl = g.length(&next)?;
        if next != step.result || nl > len {
            return Ok(false);
        }
        cur = next;
        len = nl;
    }
    if cur != t.result || !g.is_s_minimal(&t.class_rep)? {
        return Ok(false);
    }
    let face = g.relative_i(g.finite().all_nodes(), &t.class_rep)?;
    let recomposed = g.mul(&g.from_finite(t.v_part.clone()), &t.class_rep)?;
    Ok(recomposed == t.result
        && g.finite().in_parabolic(&t.v_part, face)
        && g.length(&t.result)? == g.length(&t.class_rep)? + g.finite().length(&t.v_part) as u64)
}

/// The unique `w` in `W~^S` with `a` in the class `[w]`.
pub fn classify(g: &AffineWeylGroup, a: &AffineElt) -> Result<AffineElt> {
    Ok(reduce_to_minimal(g, a)?.class_rep)
}

/// Whether `a` has minimal length in its `W`-conjugation orbit.
pub fn is_orbit_minimal(g: &AffineWeylGroup, a: &AffineElt) -> Result<bool> {
    let class = approx_class(g, a, BranchPolicy::SmallestIndex)?;
    Ok(strict_drop(g, &class, BranchPolicy::SmallestIndex)?.is_none())
}

/// `(W . w)_min` for `w` in `W~^S`; it is the `~S`-class of `w`.
pub fn orbit_min_set(g: &AffineWeylGroup, w: &AffineElt) -> Result<Vec<AffineElt>> {
    if !g.is_s_minimal(w)? {
        return Err(Error::Precondition(format!(
            "{} is not in W~^S",
            g.format(w)
        )));
    }
    let mut members = approx_class(g, w, BranchPolicy::SmallestIndex)?.members;
    members.sort();
    Ok(members)
}

/// `w <=_S w'`: some minimal-length element of `W . w` lies below `w'` in Bruhat order.
pub fn leq_s(g: &AffineWeylGroup, w: &AffineElt, w_prime: &AffineElt) -> Result<bool> {
    for v in orbit_min_set(g, w)? {
        if g.bruhat_leq(&v, w_prime)? {
            return Ok(true);
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStepDoc {
    pub conjugate_by: String,
    pub result: String,
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub schema: String,
    pub root_system: String,
    pub source: String,
    pub steps: Vec<TraceStepDoc>,
    pub result: String,
    pub class_rep: String,
    pub v_part: String,
}

impl TraceDoc {
    pub fn new(g: &AffineWeylGroup, t: &MinimalizationTrace) -> Result<TraceDoc> {
        Ok(TraceDoc {
            schema: TRACE_SCHEMA.into(),
            root_system: g.root_system().label(),
            source: g.format(&t.source),
            steps: t
                .steps
                .iter()
                .map(|s| {
                    Ok(TraceStepDoc {
                        conjugate_by: format!("s{}", s.node + 1),
                        result: g.format(&s.result),
                        length: g.length(&s.result)?,
                    })
                })
                .collect::<Result<_>>()?,
            result: g.format(&t.result),
            class_rep: g.format(&t.class_rep),
            v_part: g.finite().format(&t.v_part),
        })
    }
}
