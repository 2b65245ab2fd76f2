//! Labels of the wonderful compactification: `B x B`-orbits `[J, x, y]`,
//! `G`-stable pieces `Z_{J, w}`, their closure order and the boundary of the
//! Steinberg fiber. Only labels and orders are modelled.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::afweyl::NormalForm;
use crate::error::{Error, Result};
use crate::rootsys::NodeSet;
use crate::weyl::{WeylElt, WeylGroup};

pub const CLOSURE_SCHEMA: &str = "adlv.closure/1";
pub const BOUNDARY_SCHEMA: &str = "adlv.boundary/1";

/// `Z_{J, w}` with `w` in `W^J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GPieceLabel {
    pub j: NodeSet,
    pub w: WeylElt,
}

/// `[J, x, y]` with `x` in `W^J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BxBLabel {
    pub j: NodeSet,
    pub x: WeylElt,
    pub y: WeylElt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecializeMode {
    Orbit,
    KPiece,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    BxB(BxBLabel),
    GPiece(GPieceLabel),
}

impl GPieceLabel {
    pub fn new(wg: &WeylGroup, j: NodeSet, w: WeylElt) -> Result<GPieceLabel> {
        if !wg.is_min_coset_rep(&w, j) {
            return Err(Error::Precondition(format!("{} is not in W^{j}", wg.format(&w))));
        }
        Ok(GPieceLabel { j, w })
    }

    pub fn format(&self, wg: &WeylGroup) -> String {
        format!("({}, {})", self.j, wg.format(&self.w))
    }

    /// Parses `"({1}, s1 s2)"`.
    pub fn parse(wg: &WeylGroup, text: &str) -> Result<GPieceLabel> {
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (J, w), got {text:?}")))?;
        let close = inner
            .find('}')
            .ok_or_else(|| Error::Parse(format!("missing node set in {text:?}")))?;
        let j = NodeSet::parse(&inner[..=close], wg.rank())?;
        let rest = inner[close + 1..]
            .trim_start()
            .strip_prefix(',')
            .ok_or_else(|| Error::Parse(format!("missing comma in {text:?}")))?;
        GPieceLabel::new(wg, j, wg.parse_word(rest.trim())?)
    }
}

impl BxBLabel {
    pub fn format(&self, wg: &WeylGroup) -> String {
        format!("[{}, {}, {}]", self.j, wg.format(&self.x), wg.format(&self.y))
    }
}

/// All `(J, w)`, `J` by size then listing, `w` in ShortLex.
pub fn enumerate_gpieces(wg: &WeylGroup) -> Result<Vec<GPieceLabel>> {
    wg.check_enumeration("G-stable piece enumeration")?;
    let mut out = Vec::new();
    for j in NodeSet::all_subsets(wg.rank()) {
        for w in wg.min_coset_reps(j)? {
            out.push(GPieceLabel { j, w });
        }
    }
    Ok(out)
}

/// Whether `Z_b` lies in the closure of `Z_a`: `b.J` in `a.J` and
/// `b.w >= u a.w u^-1` for some `u` in `W_{a.J}`.
pub fn gpiece_closure_contains(wg: &WeylGroup, a: &GPieceLabel, b: &GPieceLabel) -> Result<bool> {
    if !b.j.is_subset(a.j) {
        return Ok(false);
    }
    for u in wg.parabolic_elements(a.j)? {
        let c = wg.mul(&wg.mul(&u, &a.w), &wg.inv(&u));
        if wg.bruhat_leq(&c, &b.w) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The pieces making up the boundary of the Steinberg fiber: `J != S` and full support.
pub fn steinberg_boundary(wg: &WeylGroup) -> Result<Vec<GPieceLabel>> {
    let s = wg.all_nodes();
    Ok(enumerate_gpieces(wg)?
        .into_iter()
        .filter(|l| l.j != s && wg.supp(&l.w) == s)
        .collect())
}

/// Label of the image under specialization: `[I(lambda), x, y]` for an
/// Iwahori double coset, `Z_{delta(I(lambda)), x*}` for a piece `K_{x e^(-lambda)}`.
pub fn specialize_labels(wg: &WeylGroup, nf: &NormalForm, mode: SpecializeMode) -> Result<Label> {
    match mode {
        SpecializeMode::Orbit => Ok(Label::BxB(BxBLabel {
            j: nf.j,
            x: nf.x.clone(),
            y: nf.y.clone(),
        })),
        SpecializeMode::KPiece => {
            if !nf.y.is_identity() {
                return Err(Error::Precondition(format!(
                    "piece labels need y = e, got y = {}",
                    wg.format(&nf.y)
                )));
            }
            Ok(Label::GPiece(GPieceLabel {
                j: wg.delta_set(nf.j),
                w: wg.star(&nf.x),
            }))
        }
    }
}

/// Whether some reduced word of `w` uses every simple reflection exactly once.
pub fn is_coxeter(wg: &WeylGroup, w: &WeylElt) -> bool {
    wg.length(w) == wg.rank() && wg.supp(w) == wg.all_nodes()
}

/// The closure order on `labels` as `(i, j)` pairs meaning `Z_j` lies in the closure of `Z_i`.
pub fn closure_relation(wg: &WeylGroup, labels: &[GPieceLabel]) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            if gpiece_closure_contains(wg, a, b)? {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Covering pairs of a partial order given as its full relation.
pub fn hasse_edges(n: usize, relation: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut le = vec![vec![false; n]; n];
    for &(i, j) in relation {
        le[i][j] = true;
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !le[i][j] {
                continue;
            }
            if !(0..n).any(|k| k != i && k != j && le[i][k] && le[k][j]) {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDoc {
    #[serde(rename = "J")]
    pub j: String,
    pub w: String,
}

impl LabelDoc {
    fn new(wg: &WeylGroup, l: &GPieceLabel) -> LabelDoc {
        LabelDoc {
            j: l.j.to_string(),
            w: wg.format(&l.w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureDoc {
    pub schema: String,
    pub root_system: String,
    pub labels: Vec<LabelDoc>,
    /// `[i, j]`: label `j` lies in the closure of label `i`.
    pub contains: Vec<[usize; 2]>,
    pub hasse: Vec<[usize; 2]>,
}

impl ClosureDoc {
    pub fn new(wg: &WeylGroup) -> Result<ClosureDoc> {
        let labels = enumerate_gpieces(wg)?;
        let relation = closure_relation(wg, &labels)?;
        let hasse = hasse_edges(labels.len(), &relation);
        Ok(ClosureDoc {
            schema: CLOSURE_SCHEMA.into(),
            root_system: wg.root_system().label(),
            labels: labels.iter().map(|l| LabelDoc::new(wg, l)).collect(),
            contains: relation.into_iter().map(|(i, j)| [i, j]).collect(),
            hasse: hasse.into_iter().map(|(i, j)| [i, j]).collect(),
        })
    }

    /// Hasse diagram, larger pieces on top.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph closure_{} {{\n  rankdir=BT;\n", self.root_system);
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"({}, {})\"];\n", l.j, l.w));
        }
        for [i, j] in &self.hasse {
            out.push_str(&format!("  n{j} -> n{i};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryDoc {
    pub schema: String,
    pub root_system: String,
    pub labels: Vec<LabelDoc>,
}

impl BoundaryDoc {
    pub fn new(wg: &WeylGroup) -> Result<BoundaryDoc> {
        Ok(BoundaryDoc {
            schema: BOUNDARY_SCHEMA.into(),
            root_system: wg.root_system().label(),
            labels: steinberg_boundary(wg)?.iter().map(|l| LabelDoc::new(wg, l)).collect(),
        })
    }
}

impl fmt::Display for SpecializeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecializeMode::Orbit => f.write_str("orbit"),
            SpecializeMode::KPiece => f.write_str("kpiece"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::afweyl::AffineWeylGroup;
    use crate::rootsys::{CartanType, Coweight};

    fn group(kind: CartanType, rank: usize) -> WeylGroup {
        WeylGroup::from_type(kind, rank).unwrap()
    }

    #[test]
    fn counts() {
        let a1 = group(CartanType::A, 1);
        let a2 = group(CartanType::A, 2);
        assert_eq!(enumerate_gpieces(&a1).unwrap().len(), 3);
        assert_eq!(enumerate_gpieces(&a2).unwrap().len(), 13);
        let b1 = steinberg_boundary(&a1).unwrap();
        assert_eq!(b1.len(), 1);
        assert_eq!(b1[0].format(&a1), "({}, s1)");
        let b2: Vec<String> = steinberg_boundary(&a2).unwrap().iter().map(|l| l.format(&a2)).collect();
        assert_eq!(b2, ["({}, s1 s2)", "({}, s2 s1)", "({}, s1 s2 s1)", "({1}, s1 s2)", "({2}, s2 s1)"]);
    }

    #[test]
    fn guard() {
        let a5 = group(CartanType::A, 5);
        assert!(matches!(enumerate_gpieces(&a5), Err(Error::Guard(_))));
    }

    #[test]
    fn closure_basics() {
        let wg = group(CartanType::A, 2);
        let labels = enumerate_gpieces(&wg).unwrap();
        for a in &labels {
            assert!(gpiece_closure_contains(&wg, a, a).unwrap());
            let top = GPieceLabel { j: NodeSet::EMPTY, w: wg.longest().clone() };
            assert!(gpiece_closure_contains(&wg, a, &top).unwrap());
            assert_eq!(gpiece_closure_contains(&wg, &top, a).unwrap(), *a == top);
        }
    }

    #[test]
    fn label_round_trip() {
        let wg = group(CartanType::A, 3);
        for l in enumerate_gpieces(&wg).unwrap() {
            assert_eq!(GPieceLabel::parse(&wg, &l.format(&wg)).unwrap(), l);
        }
        assert!(GPieceLabel::parse(&wg, "({1}, s1)").is_err());
    }

    #[test]
    fn coxeter() {
        let wg = group(CartanType::A, 2);
        assert!(is_coxeter(&wg, &wg.parse_word("s1 s2").unwrap()));
        assert!(!is_coxeter(&wg, &wg.identity()));
        assert!(!is_coxeter(&wg, &wg.parse_word("s1 s2 s1").unwrap()));
    }

    #[test]
    fn specialize_examples() {
        let g = AffineWeylGroup::from_type(CartanType::A, 2).unwrap();
        let wg = g.finite();
        let rho = g.compose(&wg.identity(), &Coweight::new(vec![1, 1]), &wg.identity()).unwrap();
        let nf = g.normalize(&rho).unwrap();
        assert_eq!(
            specialize_labels(wg, &nf, SpecializeMode::KPiece).unwrap(),
            Label::GPiece(GPieceLabel { j: NodeSet::EMPTY, w: wg.identity() })
        );
        let a = g.compose(&wg.simple(1), &Coweight::new(vec![0, 3]), &wg.identity()).unwrap();
        let nf = g.normalize(&a).unwrap();
        assert_eq!(
            specialize_labels(wg, &nf, SpecializeMode::KPiece).unwrap(),
            Label::GPiece(GPieceLabel { j: NodeSet::singleton(1), w: wg.simple(0) })
        );
        let b = g.compose(&wg.simple(1), &Coweight::new(vec![0, 3]), &wg.simple(0)).unwrap();
        let nf = g.normalize(&b).unwrap();
        assert!(specialize_labels(wg, &nf, SpecializeMode::KPiece).is_err());
    }

    #[test]
    fn dot_export() {
        let wg = group(CartanType::A, 1);
        let doc = ClosureDoc::new(&wg).unwrap();
        let dot = doc.to_dot();
        assert!(dot.starts_with("digraph closure_A1 {"));
        assert_eq!(doc.hasse.len(), 2);
    }
}
