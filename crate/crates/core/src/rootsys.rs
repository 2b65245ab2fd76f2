//! Root data for one irreducible type, stored as integer vectors.
//!
//! Roots are kept in simple-root coordinates. Coweights are kept in
//! fundamental-coweight coordinates, i.e. the tuple of pairings
//! `<lambda, alpha_i>`, since nearly every formula downstream consumes pairings.
//! The Cartan matrix follows the convention `cartan[i][j] = <alpha_i^vee, alpha_j>`,
//! so row `i` is the simple coroot `alpha_i^vee` in coweight coordinates.
//!
//! Node indices are 0-based internally; text output is 1-based.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{checked_add, checked_mul, Error, Result};

/// Largest rank accepted; node sets are 64-bit masks.
pub const MAX_RANK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    fn admits_rank(self, rank: usize) -> bool {
        match self {
            CartanType::A => (1..=MAX_RANK).contains(&rank),
            CartanType::B | CartanType::C => (2..=MAX_RANK).contains(&rank),
            CartanType::D => (4..=MAX_RANK).contains(&rank),
            CartanType::E => (6..=8).contains(&rank),
            CartanType::F => rank == 4,
            CartanType::G => rank == 2,
        }
    }

    /// Number of positive roots, used to validate the enumeration.
    fn positive_root_count(self, n: usize) -> usize {
        match (self, n) {
            (CartanType::A, _) => n * (n + 1) / 2,
            (CartanType::B | CartanType::C, _) => n * n,
            (CartanType::D, _) => n * (n - 1),
            (CartanType::E, 6) => 36,
            (CartanType::E, 7) => 63,
            (CartanType::E, _) => 120,
            (CartanType::F, _) => 24,
            (CartanType::G, _) => 6,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A => "A",
            CartanType::B => "B",
            CartanType::C => "C",
            CartanType::D => "D",
            CartanType::E => "E",
            CartanType::F => "F",
            CartanType::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            other => Err(Error::Parse(format!("unknown type label {other:?}"))),
        }
    }
}

/// A subset of the simple nodes `S`, as a bit mask over 0-based indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn full(rank: usize) -> NodeSet {
        if rank >= 64 {
            NodeSet(u64::MAX)
        } else {
            NodeSet((1u64 << rank) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> NodeSet {
        NodeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> NodeSet {
        NodeSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    /// `S - self` for a root system of the given rank.
    pub fn complement(self, rank: usize) -> NodeSet {
        NodeSet(NodeSet::full(rank).0 & !self.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// All subsets of `S`, ordered by size and then by their 1-based listing.
    pub fn all_subsets(rank: usize) -> Vec<NodeSet> {
        let mut out: Vec<NodeSet> = (0..(1u64 << rank)).map(NodeSet).collect();
        out.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>()));
        out
    }

    /// Parses `"{1,2}"`, `"1,2"`, `"{}"` or `""` (1-based node labels).
    pub fn parse(s: &str, rank: usize) -> Result<NodeSet> {
        let body = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = NodeSet::EMPTY;
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let i: usize = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad node label {tok:?}")))?;
            if i == 0 || i > rank {
                return Err(Error::Parse(format!("node {i} out of range 1..={rank}")));
            }
            set.insert(i - 1);
        }
        Ok(set)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// A coweight in fundamental-coweight coordinates: `coords[i] = <lambda, alpha_i>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coweight(Vec<i64>);

impl Coweight {
    pub fn new(coords: Vec<i64>) -> Coweight {
        Coweight(coords)
    }

    pub fn zero(rank: usize) -> Coweight {
        Coweight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn checked_add(&self, other: &Coweight) -> Result<Coweight> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| checked_add(a, b))
            .collect::<Result<_>>()
            .map(Coweight)
    }

    pub fn checked_sub(&self, other: &Coweight) -> Result<Coweight> {
        self.checked_add(&other.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Coweight> {
        self.0
            .iter()
            .map(|&a| a.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<_>>()
            .map(Coweight)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Coweight> {
        self.0
            .iter()
            .map(|&a| checked_mul(a, k))
            .collect::<Result<_>>()
            .map(Coweight)
    }

    /// Parses `"0,628,628"` or `"[0,628,628]"`.
    pub fn parse(s: &str) -> Result<Coweight> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        if body.trim().is_empty() {
            return Err(Error::Parse("empty coweight".into()));
        }
        body.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad coordinate {t:?}")))
            })
            .collect::<Result<_>>()
            .map(Coweight)
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Immutable root data for one irreducible type.
#[derive(Debug, Clone)]
pub struct RootSystem {
    kind: CartanType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// All roots; `roots[..n_pos]` are positive in height order and
    /// `roots[n_pos + k] = -roots[k]`.
    roots: Vec<Vec<i64>>,
    n_pos: usize,
    index: HashMap<Vec<i64>, usize>,
    theta: usize,
    /// `coroots[k]` is the coroot of positive root `k` in coweight coordinates.
    coroots: Vec<Coweight>,
    /// `det(C)` and `adj(C^T)`, for solving `C^T m = c` exactly.
    lattice_det: i128,
    lattice_adj: Vec<Vec<i128>>,
}

fn cartan_matrix(kind: CartanType, n: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize, aij: i64, aji: i64| {
        a[i][j] = aij;
        a[j][i] = aji;
    };
    match kind {
        CartanType::A => (0..n.saturating_sub(1)).for_each(|i| link(i, i + 1, -1, -1)),
        CartanType::B => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -1, -2);
        }
        CartanType::C => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 2, n - 1, -2, -1);
        }
        CartanType::D => {
            (0..n - 2).for_each(|i| link(i, i + 1, -1, -1));
            link(n - 3, n - 1, -1, -1);
        }
        CartanType::E => {
            // Bourbaki labels: 1-3-4-5-6-7-8 with 2 attached to 4.
            link(0, 2, -1, -1);
            link(1, 3, -1, -1);
            (2..n - 1).for_each(|i| link(i, i + 1, -1, -1));
        }
        CartanType::F => {
            link(0, 1, -1, -1);
            link(1, 2, -1, -2);
            link(2, 3, -1, -1);
        }
        CartanType::G => link(0, 1, -3, -1),
    }
    a
}

/// `(det, adjugate)` of an integer matrix, by exact rational elimination.
fn det_and_adjugate(m: &[Vec<i64>]) -> (i128, Vec<Vec<i128>>) {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect())
        .collect();
    let mut inv: Vec<Vec<Ratio<i128>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Ratio::from_integer(i128::from(i == j)))
                .collect()
        })
        .collect();
    let mut det = Ratio::from_integer(1i128);
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| a[r][col] != Ratio::from_integer(0))
            .expect("Cartan matrices are nondegenerate");
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && a[r][col] != Ratio::from_integer(0) {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    let det = det.to_integer();
    let adj = inv
        .iter()
        .map(|r| r.iter().map(|x| (x * det).to_integer()).collect())
        .collect();
    (det, adj)
}

impl RootSystem {
    /// Builds the root data of type `kind` and rank `rank`.
    pub fn new(kind: CartanType, rank: usize) -> Result<RootSystem> {
        if !kind.admits_rank(rank) {
            return Err(Error::InvalidType {
                kind: kind.to_string(),
                rank,
            });
        }
        let cartan = cartan_matrix(kind, rank);

        // Close the simple roots under the simple reflections.
        let reflect = |beta: &[i64], i: usize| -> Vec<i64> {
            let k: i64 = beta.iter().zip(&cartan[i]).map(|(b, a)| b * a).sum();
            let mut out = beta.to_vec();
            out[i] -= k;
            out
        };
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..rank {
            let mut e = vec![0; rank];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..rank {
                let r = reflect(&beta, i);
                if !seen.contains_key(&r) {
                    seen.insert(r.clone(), ());
                    queue.push_back(r);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen
            .into_keys()
            .filter(|r| r.iter().all(|&c| c >= 0))
            .collect();
        positive.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
        let n_pos = positive.len();
        if n_pos != kind.positive_root_count(rank) {
            return Err(Error::Invariant(format!(
                "{kind}{rank}: enumerated {n_pos} positive roots"
            )));
        }
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|c| -c).collect()));
        let index = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();

        let (lattice_det, lattice_adj) = {
            let t: Vec<Vec<i64>> = (0..rank)
                .map(|i| (0..rank).map(|j| cartan[j][i]).collect())
                .collect();
            det_and_adjugate(&t)
        };

        let mut rs = RootSystem {
            kind,
            rank,
            cartan,
            roots,
            n_pos,
            index,
            theta: n_pos - 1,
            coroots: Vec::new(),
            lattice_det,
            lattice_adj,
        };
        let top = rs.height(n_pos - 1);
        if n_pos > 1 && rs.height(n_pos - 2) == top {
            return Err(Error::Invariant("highest root is not unique".into()));
        }
        rs.coroots = (0..n_pos).map(|k| rs.compute_coroot(k)).collect();
        Ok(rs)
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.kind, self.rank)
    }

    pub fn num_positive(&self) -> usize {
        self.n_pos
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    /// Root `k` in simple-root coordinates.
    pub fn root(&self, k: usize) -> &[i64] {
        &self.roots[k]
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.n_pos]
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.n_pos
    }

    pub fn negate(&self, k: usize) -> usize {
        if k < self.n_pos {
            k + self.n_pos
        } else {
            k - self.n_pos
        }
    }

    pub fn root_index(&self, coeffs: &[i64]) -> Option<usize> {
        self.index.get(coeffs).copied()
    }

    /// Index of the simple root `alpha_i`.
    pub fn simple_root(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank];
        e[i] = 1;
        self.index[&e]
    }

    pub fn height(&self, k: usize) -> i64 {
        self.roots[k].iter().sum()
    }

    /// Index of the highest root.
    pub fn theta(&self) -> usize {
        self.theta
    }

    /// Whether root `k` lies in the span of the simple roots in `j`.
    pub fn root_in_parabolic(&self, k: usize, j: NodeSet) -> bool {
        self.roots[k]
            .iter()
            .enumerate()
            .all(|(i, &c)| c == 0 || j.contains(i))
    }

    /// Image of root `k` under the simple reflection `s_i`.
    pub fn reflect_root(&self, i: usize, k: usize) -> usize {
        let beta = &self.roots[k];
        let c: i64 = beta.iter().zip(&self.cartan[i]).map(|(b, a)| b * a).sum();
        let mut out = beta.clone();
        out[i] -= c;
        self.index[&out]
    }

    /// Simple coroot `alpha_i^vee` in coweight coordinates.
    pub fn simple_coroot(&self, i: usize) -> Coweight {
        Coweight(self.cartan[i].clone())
    }

    /// Coroot of positive root `k` in coweight coordinates.
    pub fn coroot(&self, k: usize) -> &Coweight {
        &self.coroots[k]
    }

    /// `theta^vee`.
    pub fn theta_coroot(&self) -> &Coweight {
        &self.coroots[self.theta]
    }

    fn compute_coroot(&self, k: usize) -> Coweight {
        // Walk k down to a simple root, then carry that coroot back up.
        let mut path = Vec::new();
        let mut cur = k;
        while self.height(cur) > 1 {
            let beta = &self.roots[cur];
            let i = (0..self.rank)
                .find(|&i| beta.iter().zip(&self.cartan[i]).map(|(b, a)| b * a).sum::<i64>() > 0)
                .expect("a non-simple positive root pairs positively with some simple coroot");
            path.push(i);
            cur = self.reflect_root(i, cur);
        }
        let j = self.roots[cur].iter().position(|&c| c == 1).unwrap();
        let mut cw = self.simple_coroot(j);
        for &i in path.iter().rev() {
            cw = self.reflect_coweight(i, &cw).expect("coroots are small");
        }
        cw
    }

    /// `s_i(lambda) = lambda - <lambda, alpha_i> alpha_i^vee`.
    pub fn reflect_coweight(&self, i: usize, lambda: &Coweight) -> Result<Coweight> {
        let ci = lambda.0[i];
        lambda
            .0
            .iter()
            .zip(&self.cartan[i])
            .map(|(&c, &a)| checked_add(c, checked_mul(-ci, a)?))
            .collect::<Result<_>>()
            .map(Coweight)
    }

    pub fn check_dim(&self, lambda: &Coweight) -> Result<()> {
        if lambda.rank() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: lambda.rank(),
            });
        }
        Ok(())
    }

    /// `<lambda, alpha>` for root index `k`, by linearity.
    pub fn pair(&self, lambda: &Coweight, k: usize) -> Result<i64> {
        self.check_dim(lambda)?;
        self.roots[k]
            .iter()
            .zip(&lambda.0)
            .try_fold(0i64, |acc, (&b, &c)| checked_add(acc, checked_mul(b, c)?))
    }

    /// The face `I(lambda) = { i : <lambda, alpha_i> = 0 }` of a dominant coweight.
    pub fn i_lambda(&self, lambda: &Coweight) -> Result<NodeSet> {
        self.check_dim(lambda)?;
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let mut j = NodeSet::EMPTY;
        for (i, &c) in lambda.0.iter().enumerate() {
            if c == 0 {
                j.insert(i);
            }
        }
        Ok(j)
    }

    /// `rho^vee_J`: pairs to 1 with `alpha_i` for `i` in `J` and to 0 otherwise.
    pub fn rho_vee(&self, j: NodeSet) -> Coweight {
        Coweight((0..self.rank).map(|i| i64::from(j.contains(i))).collect())
    }

    /// `<rho^vee, theta>`, the height of the highest root.
    pub fn rho_theta(&self) -> i64 {
        self.height(self.theta)
    }

    /// `(<rho^vee, theta> + 2)^exponent`.
    pub fn regularity_bound(&self, exponent: usize) -> Result<i64> {
        let base = self.rho_theta() + 2;
        (0..exponent).try_fold(1i64, |acc, _| checked_mul(acc, base))
    }

    /// The quasi-regularity threshold `(<rho^vee, theta> + 2)^(|S|+1)`.
    pub fn quasi_regular_bound(&self) -> Result<i64> {
        self.regularity_bound(self.rank + 1)
    }

    /// Whether every root pairing of `lambda` is zero or at least the bound in
    /// absolute value; returns the bound alongside.
    pub fn is_quasi_regular(&self, lambda: &Coweight) -> Result<(bool, i64)> {
        let bound = self.quasi_regular_bound()?;
        for k in 0..self.n_pos {
            let p = self.pair(lambda, k)?;
            if p != 0 && p.unsigned_abs() < bound as u64 {
                return Ok((false, bound));
            }
        }
        Ok((true, bound))
    }

    /// Coordinates of `lambda` in the simple-coroot basis, if integral.
    pub fn coroot_coords(&self, lambda: &Coweight) -> Result<Option<Vec<i64>>> {
        self.check_dim(lambda)?;
        let mut out = Vec::with_capacity(self.rank);
        for row in &self.lattice_adj {
            let num: i128 = row
                .iter()
                .zip(&lambda.0)
                .map(|(&a, &c)| a * c as i128)
                .sum();
            if num % self.lattice_det != 0 {
                return Ok(None);
            }
            let m = i64::try_from(num / self.lattice_det).map_err(|_| Error::Overflow)?;
            out.push(m);
        }
        Ok(Some(out))
    }

    /// Membership in the coroot lattice `X`.
    pub fn in_coroot_lattice(&self, lambda: &Coweight) -> bool {
        matches!(self.coroot_coords(lambda), Ok(Some(_)))
    }

    /// Index of the coroot lattice in the coweight lattice.
    pub fn fundamental_group_order(&self) -> i128 {
        self.lattice_det.abs()
    }
}
