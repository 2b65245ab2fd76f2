//! The decider for emptiness of `X_w(1)`.
//!
//! Rules are tried in order and the first match wins:
//!
//! 1. `a = e`: nonempty.
//! 2. `a` outside `W_a`: empty.
//! 3. `a = x e^(-lambda) y^-1` with `lambda = 0`: out of scope.
//! 4. `supp(y^-1 x) != S`: empty.
//! 5. no member of `kpieces(a)` has full support: empty.
//! 6. `lambda` quasi-regular: nonempty.
//! 7. `lambda` large off `J` and either `y = e` with `supp(x) = S`, or
//!    `supp(u y^-1 x u^-1) = S` for all `u` in `W_J`: nonempty.
//! 8. otherwise out of scope.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::afweyl::{AffineElt, AffineWeylGroup};
use crate::error::{Error, Result};
use crate::pieces::{PieceSet, PieceSolver};
use crate::rootsys::Coweight;
use crate::weyl::WeylElt;

pub const VERDICT_SCHEMA: &str = "adlv.verdict/1";
pub const TABLE_SCHEMA: &str = "adlv.table/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Empty,
    NonEmpty,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    NotInWa,
    SmallSupport,
    Main2Empty,
    Main2NonEmpty,
    Main3NonEmpty,
    IdentityElement,
    OutOfScope,
}

impl Rule {
    pub fn status(self) -> Status {
        match self {
            Rule::NotInWa | Rule::SmallSupport | Rule::Main2Empty => Status::Empty,
            Rule::Main2NonEmpty | Rule::Main3NonEmpty | Rule::IdentityElement => Status::NonEmpty,
            Rule::OutOfScope => Status::Inconclusive,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormDoc {
    #[serde(rename = "J")]
    pub j: String,
    pub x: String,
    pub lambda: Coweight,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: i64,
    pub holds: bool,
}

/// Which hypothesis of the large-`lambda` nonemptiness rule was met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Main3Clause {
    IdentityYFullX,
    AllConjugatesFull,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub element: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normal_form: Option<NormalFormDoc>,
    /// `supp(y^-1 x)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub support: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pieces: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub full_support_piece: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quasi_regular: Option<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub large_off_face: Option<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub clause: Option<Main3Clause>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    pub evidence: Evidence,
}

impl Verdict {
    fn new(rule: Rule, evidence: Evidence) -> Verdict {
        Verdict {
            status: rule.status(),
            rule,
            evidence,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        self.status != Status::Inconclusive
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub schema: String,
    pub version: String,
    pub root_system: String,
    pub status: Status,
    pub rule: Rule,
    pub evidence: Evidence,
}

impl VerdictDoc {
    pub fn new(g: &AffineWeylGroup, v: &Verdict) -> VerdictDoc {
        VerdictDoc {
            schema: VERDICT_SCHEMA.into(),
            version: VERSION.into(),
            root_system: g.root_system().label(),
            status: v.status,
            rule: v.rule,
            evidence: v.evidence.clone(),
        }
    }
}

/// Decider holding a piece memo shared across calls.
pub struct Decider<'g> {
    g: &'g AffineWeylGroup,
    solver: PieceSolver<'g>,
}

impl<'g> Decider<'g> {
    pub fn new(g: &'g AffineWeylGroup) -> Decider<'g> {
        Decider {
            g,
            solver: PieceSolver::new(g),
        }
    }

    pub fn pieces(&mut self, a: &AffineElt) -> Result<PieceSet> {
        self.solver.kpieces(a)
    }

    pub fn decide(&mut self, a: &AffineElt) -> Result<Verdict> {
        let g = self.g;
        let fin = g.finite();
        let rs = g.root_system();
        let s = fin.all_nodes();
        let mut ev = Evidence {
            element: g.format(a),
            ..Evidence::default()
        };
        if *a == g.identity() {
            return Ok(Verdict::new(Rule::IdentityElement, ev));
        }
        if !g.in_affine_subgroup(a) {
            return Ok(Verdict::new(Rule::NotInWa, ev));
        }
        let nf = g.normalize(a)?;
        ev.normal_form = Some(NormalFormDoc {
            j: nf.j.to_string(),
            x: fin.format(&nf.x),
            lambda: nf.lambda.clone(),
            y: fin.format(&nf.y),
        });
        if nf.j == s {
            ev.note = Some("lambda = 0".into());
            return Ok(Verdict::new(Rule::OutOfScope, ev));
        }
        let z = fin.mul(&fin.inv(&nf.y), &nf.x);
        let supp = fin.supp(&z);
        ev.support = Some(supp.to_string());
        if supp != s {
            return Ok(Verdict::new(Rule::SmallSupport, ev));
        }

        let p = self.solver.kpieces(a)?;
        ev.pieces = Some(p.members.iter().map(|m| g.format(m)).collect());
        let full = p.members.iter().find(|m| fin.supp(&m.fin) == s);
        let Some(full) = full else {
            return Ok(Verdict::new(Rule::Main2Empty, ev));
        };
        ev.full_support_piece = Some(g.format(full));

        let (qr, qbound) = rs.is_quasi_regular(&nf.lambda)?;
        ev.quasi_regular = Some(BoundCheck {
            bound: qbound,
            holds: qr,
        });
        if qr {
            return Ok(Verdict::new(Rule::Main2NonEmpty, ev));
        }

        let (large, lbound) = large_off_face(g, &nf.lambda, nf.j)?;
        ev.large_off_face = Some(BoundCheck {
            bound: lbound,
            holds: large,
        });
        if large {
            if nf.y.is_identity() && fin.supp(&nf.x) == s {
                ev.clause = Some(Main3Clause::IdentityYFullX);
                return Ok(Verdict::new(Rule::Main3NonEmpty, ev));
            }
            match all_conjugates_full(g, &z, nf.j) {
                Ok(true) => {
                    ev.clause = Some(Main3Clause::AllConjugatesFull);
                    return Ok(Verdict::new(Rule::Main3NonEmpty, ev));
                }
                Ok(false) => {}
                Err(Error::Guard(msg)) => ev.note = Some(msg),
                Err(e) => return Err(e),
            }
        }
        Ok(Verdict::new(Rule::OutOfScope, ev))
    }
}

pub fn decide(g: &AffineWeylGroup, a: &AffineElt) -> Result<Verdict> {
    Decider::new(g).decide(a)
}

/// `<lambda, alpha_i> >= (<rho^vee, theta> + 2)^(|J|+1)` for every `i` outside `J`.
fn large_off_face(g: &AffineWeylGroup, lambda: &Coweight, j: crate::rootsys::NodeSet) -> Result<(bool, i64)> {
    let bound = g.root_system().regularity_bound(j.len() + 1)?;
    let holds = j
        .complement(g.rank())
        .iter()
        .all(|i| lambda.coords()[i] >= bound);
    Ok((holds, bound))
}

fn all_conjugates_full(g: &AffineWeylGroup, z: &WeylElt, j: crate::rootsys::NodeSet) -> Result<bool> {
    let fin = g.finite();
    let s = fin.all_nodes();
    for u in fin.parabolic_elements(j)? {
        let c = fin.mul(&fin.mul(&u, z), &fin.inv(&u));
        if fin.supp(&c) != s {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Re-checks a verdict from its evidence alone.
pub fn verify_verdict(g: &AffineWeylGroup, v: &Verdict) -> Result<bool> {
    let fin = g.finite();
    let rs = g.root_system();
    let s = fin.all_nodes();
    if v.status != v.rule.status() {
        return Ok(false);
    }
    let a = g.parse(&v.evidence.element)?;
    if v.rule == Rule::IdentityElement {
        return Ok(a == g.identity());
    }
    if a == g.identity() {
        return Ok(false);
    }
    if v.rule == Rule::NotInWa {
        return Ok(!g.in_affine_subgroup(&a));
    }
    if !g.in_affine_subgroup(&a) {
        return Ok(false);
    }
    let Some(nfd) = &v.evidence.normal_form else {
        return Ok(false);
    };
    let x = fin.parse_word(&nfd.x)?;
    let y = fin.parse_word(&nfd.y)?;
    let j = rs.i_lambda(&nfd.lambda)?;
    if !fin.is_min_coset_rep(&x, j) || g.compose(&x, &nfd.lambda, &y)? != a {
        return Ok(false);
    }
    if j == s {
        return Ok(v.rule == Rule::OutOfScope);
    }
    let supp = fin.supp(&fin.mul(&fin.inv(&y), &x));
    if v.rule == Rule::SmallSupport {
        return Ok(supp != s);
    }
    if supp != s {
        return Ok(false);
    }
    let Some(listed) = &v.evidence.pieces else {
        return Ok(false);
    };
    let listed: Vec<AffineElt> = listed.iter().map(|m| g.parse(m)).collect::<Result<_>>()?;
    let full_listed = listed.iter().any(|m| fin.supp(&m.fin) == s);
    match v.rule {
        Rule::Main2Empty => {
            let p = PieceSolver::new(g).kpieces(&a)?;
            Ok(!full_listed && p.members == listed)
        }
        Rule::Main2NonEmpty => {
            let w = g.parse(v.evidence.full_support_piece.as_deref().unwrap_or(""))?;
            let p = PieceSolver::new(g).kpieces(&a)?;
            Ok(fin.supp(&w.fin) == s && p.contains(&w) && rs.is_quasi_regular(&nfd.lambda)?.0)
        }
        Rule::Main3NonEmpty => {
            let (large, _) = large_off_face(g, &nfd.lambda, j)?;
            let clause = match v.evidence.clause {
                Some(Main3Clause::IdentityYFullX) => y.is_identity() && fin.supp(&x) == s,
                Some(Main3Clause::AllConjugatesFull) => {
                    all_conjugates_full(g, &fin.mul(&fin.inv(&y), &x), j)?
                }
                None => false,
            };
            Ok(large && clause)
        }
        Rule::OutOfScope => Ok(full_listed),
        _ => Ok(false),
    }
}

/// The diagram automorphism `-w0` applied to `a`.
pub fn apply_delta(g: &AffineWeylGroup, a: &AffineElt) -> AffineElt {
    let fin = g.finite();
    let mut coords = vec![0; g.rank()];
    for (i, &c) in a.trans.coords().iter().enumerate() {
        coords[fin.delta(i)] = c;
    }
    AffineElt {
        fin: fin.star(&a.fin),
        trans: Coweight::new(coords),
    }
}

/// Verdicts for every `x e^(-lambda) y^-1`, rows `x` in `W^{I(lambda)}` and
/// columns `y` in `W`, both in ShortLex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptinessTable {
    pub lambda: Coweight,
    pub rows: Vec<WeylElt>,
    pub cols: Vec<WeylElt>,
    pub cells: Vec<Vec<Verdict>>,
}

pub fn emptiness_table(g: &AffineWeylGroup, lambda: &Coweight) -> Result<EmptinessTable> {
    let fin = g.finite();
    fin.check_enumeration("emptiness table")?;
    let j = g.root_system().i_lambda(lambda)?;
    let rows = fin.min_coset_reps(j)?;
    let cols = fin.elements()?;
    let mut decider = Decider::new(g);
    let mut cells = Vec::with_capacity(rows.len());
    for x in &rows {
        let mut row = Vec::with_capacity(cols.len());
        for y in &cols {
            row.push(decider.decide(&g.compose(x, lambda, y)?)?);
        }
        cells.push(row);
    }
    Ok(EmptinessTable {
        lambda: lambda.clone(),
        rows,
        cols,
        cells,
    })
}

impl EmptinessTable {
    /// Header row of `y` words, header column of `x` words, status per cell.
    pub fn to_csv(&self, g: &AffineWeylGroup) -> String {
        let fin = g.finite();
        let mut out = String::from("x\\y");
        for y in &self.cols {
            out.push(',');
            out.push_str(&fin.format(y));
        }
        out.push('\n');
        for (x, row) in self.rows.iter().zip(&self.cells) {
            out.push_str(&fin.format(x));
            for v in row {
                out.push(',');
                out.push_str(&v.status.to_string());
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDoc {
    pub schema: String,
    pub version: String,
    pub root_system: String,
    pub lambda: Coweight,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub status: Vec<Vec<Status>>,
    pub rule: Vec<Vec<Rule>>,
}

impl TableDoc {
    pub fn new(g: &AffineWeylGroup, t: &EmptinessTable) -> TableDoc {
        let fin = g.finite();
        TableDoc {
            schema: TABLE_SCHEMA.into(),
            version: VERSION.into(),
            root_system: g.root_system().label(),
            lambda: t.lambda.clone(),
            rows: t.rows.iter().map(|x| fin.format(x)).collect(),
            cols: t.cols.iter().map(|y| fin.format(y)).collect(),
            status: t.cells.iter().map(|r| r.iter().map(|v| v.status).collect()).collect(),
            rule: t.cells.iter().map(|r| r.iter().map(|v| v.rule).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::CartanType;

    fn aff(kind: CartanType, rank: usize) -> AffineWeylGroup {
        AffineWeylGroup::from_type(kind, rank).unwrap()
    }

    #[test]
    fn identity_is_nonempty() {
        let g = aff(CartanType::A, 3);
        let v = decide(&g, &g.identity()).unwrap();
        assert_eq!((v.status, v.rule), (Status::NonEmpty, Rule::IdentityElement));
        assert!(verify_verdict(&g, &v).unwrap());
    }

    #[test]
    fn worked_example_is_empty() {
        let g = aff(CartanType::A, 3);
        let a = g.parse_triple("x=s2 s1 s3 s2; y=s3 s2; lambda=0,628,628").unwrap();
        let v = decide(&g, &a).unwrap();
        assert_eq!((v.status, v.rule), (Status::Empty, Rule::Main2Empty));
        assert_eq!(v.evidence.pieces.as_deref(), Some(&["s3 s2 t[0,-628,-628]".to_string()][..]));
        assert!(verify_verdict(&g, &v).unwrap());
    }

    #[test]
    fn full_support_x_is_nonempty() {
        let g = aff(CartanType::A, 3);
        let a = g.parse_triple("x=s3 s2 s1; y=e; lambda=0,628,628").unwrap();
        let v = decide(&g, &a).unwrap();
        assert_eq!(v.status, Status::NonEmpty);
        assert!(verify_verdict(&g, &v).unwrap());
    }

    #[test]
    fn outside_wa_and_small_support() {
        let g = aff(CartanType::A, 2);
        let v = decide(&g, &g.parse("t[1,0]").unwrap()).unwrap();
        assert_eq!(v.rule, Rule::NotInWa);
        let a = g.parse_triple("x=s1; y=e; lambda=0,64").unwrap();
        if g.in_affine_subgroup(&a) {
            assert_eq!(decide(&g, &a).unwrap().rule, Rule::SmallSupport);
        }
        let v = decide(&g, &g.parse("s1").unwrap()).unwrap();
        assert_eq!(v.rule, Rule::OutOfScope);
        assert!(verify_verdict(&g, &v).unwrap());
    }

    #[test]
    fn large_face_clause_without_quasi_regularity() {
        // A2, J = {}: bound for clause 7 is 4^1 = 4, quasi-regular bound is 64
        let g = aff(CartanType::A, 2);
        let a = g.parse_triple("x=s1 s2; y=e; lambda=5,5").unwrap();
        assert!(g.in_affine_subgroup(&a));
        let v = decide(&g, &a).unwrap();
        assert_eq!((v.status, v.rule), (Status::NonEmpty, Rule::Main3NonEmpty));
        assert_eq!(v.evidence.clause, Some(Main3Clause::IdentityYFullX));
        assert!(verify_verdict(&g, &v).unwrap());
    }

    #[test]
    fn zero_lambda_table() {
        let g = aff(CartanType::A, 2);
        let t = emptiness_table(&g, &Coweight::zero(2)).unwrap();
        assert_eq!(t.rows.len(), 1);
        for (y, v) in t.cols.iter().zip(&t.cells[0]) {
            let want = if y.is_identity() { Status::NonEmpty } else { Status::Inconclusive };
            assert_eq!(v.status, want);
        }
        let csv = t.to_csv(&g);
        assert!(csv.starts_with("x\\y,e,s1,s2,"));
    }

    #[test]
    fn tampered_evidence_is_rejected() {
        let g = aff(CartanType::A, 3);
        let a = g.parse_triple("x=s2 s1 s3 s2; y=s3 s2; lambda=0,628,628").unwrap();
        let mut v = decide(&g, &a).unwrap();
        v.evidence.pieces = Some(vec![]);
        assert!(!verify_verdict(&g, &v).unwrap());
        v.rule = Rule::Main2NonEmpty;
        assert!(!verify_verdict(&g, &v).unwrap());
    }

    #[test]
    fn delta_is_a_homomorphism() {
        let g = aff(CartanType::A, 3);
        let a = g.parse("s1 t[2,0,-1] s3 s2").unwrap();
        let b = g.parse("s0 s2 t[0,1,0]").unwrap();
        let lhs = apply_delta(&g, &g.mul(&a, &b).unwrap());
        let rhs = g.mul(&apply_delta(&g, &a), &apply_delta(&g, &b)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(g.length(&a).unwrap(), g.length(&apply_delta(&g, &a)).unwrap());
    }
}
