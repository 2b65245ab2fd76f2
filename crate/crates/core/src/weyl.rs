//! The finite Weyl group `W` acting on roots and coweights.
//!
//! An element is stored as its permutation of the full root set, which is a
//! canonical form: two elements are equal exactly when their permutations
//! agree. Reduced words are ShortLex-minimal and computed lazily.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::rootsys::{CartanType, Coweight, NodeSet, RootSystem};

/// Enumerations of whole groups are refused above this rank unless the
/// guard is lifted.
pub const DEFAULT_ENUMERATION_RANK: usize = 4;

#[derive(Clone)]
pub struct WeylElt {
    perm: Box<[u16]>,
    word: OnceLock<Box<[u8]>>,
}

impl WeylElt {
    fn from_perm(perm: Box<[u16]>) -> WeylElt {
        WeylElt {
            perm,
            word: OnceLock::new(),
        }
    }

    /// Image of root index `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.perm[k] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(k, &p)| k == p as usize)
    }
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm
    }
}

impl Eq for WeylElt {}

impl Hash for WeylElt {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.perm.hash(state);
    }
}

impl PartialOrd for WeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.perm.cmp(&other.perm)
    }
}

impl fmt::Debug for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.word.get() {
            Some(w) => write!(f, "WeylElt({w:?})"),
            None => write!(f, "WeylElt(perm={:?})", self.perm),
        }
    }
}

/// The Weyl group of a root system, with generator tables built once.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rs: RootSystem,
    gens: Vec<WeylElt>,
    simple_roots: Vec<usize>,
    w0: WeylElt,
    delta: Vec<usize>,
    enumeration_rank: usize,
}

impl WeylGroup {
    pub fn new(rs: RootSystem) -> WeylGroup {
        let simple_roots: Vec<usize> = (0..rs.rank()).map(|i| rs.simple_root(i)).collect();
        let gens = (0..rs.rank())
            .map(|i| {
                let perm: Box<[u16]> = (0..rs.num_roots())
                    .map(|k| rs.reflect_root(i, k) as u16)
                    .collect();
                WeylElt::from_perm(perm)
            })
            .collect();
        let mut g = WeylGroup {
            gens,
            simple_roots,
            w0: WeylElt::from_perm((0..rs.num_roots() as u16).collect()),
            delta: Vec::new(),
            rs,
            enumeration_rank: DEFAULT_ENUMERATION_RANK,
        };
        let mut w0 = g.identity();
        while let Some(i) = (0..g.rank()).find(|&i| !g.has_right_descent(&w0, i)) {
            w0 = g.mul(&w0, &g.gens[i]);
        }
        g.delta = (0..g.rank())
            .map(|i| {
                let img = g.rs.negate(w0.apply(g.simple_roots[i]));
                g.simple_roots.iter().position(|&r| r == img).unwrap()
            })
            .collect();
        g.w0 = w0;
        g
    }

    pub fn from_type(kind: CartanType, rank: usize) -> Result<WeylGroup> {
        Ok(WeylGroup::new(RootSystem::new(kind, rank)?))
    }

    /// Lifts the rank guard on full enumerations.
    pub fn with_guard_override(mut self, lift: bool) -> WeylGroup {
        self.enumeration_rank = if lift {
            usize::MAX
        } else {
            DEFAULT_ENUMERATION_RANK
        };
        self
    }

    pub fn guard_lifted(&self) -> bool {
        self.enumeration_rank == usize::MAX
    }

    pub fn check_enumeration(&self, what: &str) -> Result<()> {
        if self.rank() > self.enumeration_rank {
            return Err(Error::Guard(format!(
                "{what} requires enumerating W({}) of rank {} > {}",
                self.rs.label(),
                self.rank(),
                self.enumeration_rank
            )));
        }
        Ok(())
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.rank())
    }

    pub fn identity(&self) -> WeylElt {
        WeylElt::from_perm((0..self.rs.num_roots() as u16).collect())
    }

    pub fn simple(&self, i: usize) -> WeylElt {
        self.gens[i].clone()
    }

    pub fn mul(&self, a: &WeylElt, b: &WeylElt) -> WeylElt {
        debug_assert_eq!(a.perm.len(), b.perm.len(), "mixed root systems");
        WeylElt::from_perm(b.perm.iter().map(|&k| a.perm[k as usize]).collect())
    }

    pub fn inv(&self, a: &WeylElt) -> WeylElt {
        let mut perm = vec![0u16; a.perm.len()];
        for (k, &p) in a.perm.iter().enumerate() {
            perm[p as usize] = k as u16;
        }
        WeylElt::from_perm(perm.into_boxed_slice())
    }

    /// `s_i a s_i`.
    pub fn conj_simple(&self, i: usize, a: &WeylElt) -> WeylElt {
        let s = &self.gens[i];
        self.mul(&self.mul(s, a), s)
    }

    pub fn from_word(&self, word: &[usize]) -> Result<WeylElt> {
        let mut out = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::Parse(format!("s{} out of range", i + 1)));
            }
            out = self.mul(&out, &self.gens[i]);
        }
        Ok(out)
    }

    /// Parses `"s1 s2 s3"` or `"e"` (1-based letters).
    pub fn parse_word(&self, text: &str) -> Result<WeylElt> {
        let mut word = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" || tok == "1" {
                continue;
            }
            let idx = tok
                .strip_prefix('s')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1 && n <= self.rank())
                .ok_or_else(|| Error::Parse(format!("bad Weyl letter {tok:?}")))?;
            word.push(idx - 1);
        }
        self.from_word(&word)
    }

    /// The contragredient action on coweights: `<a lambda, alpha> = <lambda, a^-1 alpha>`.
    pub fn act(&self, a: &WeylElt, lambda: &Coweight) -> Result<Coweight> {
        self.rs.check_dim(lambda)?;
        let inv = self.inv(a);
        self.simple_roots
            .iter()
            .map(|&r| self.rs.pair(lambda, inv.apply(r)))
            .collect::<Result<Vec<_>>>()
            .map(Coweight::new)
    }

    pub fn length(&self, a: &WeylElt) -> usize {
        let n = self.rs.num_positive();
        a.perm[..n].iter().filter(|&&p| p as usize >= n).count()
    }

    /// `a s_i < a`.
    pub fn has_right_descent(&self, a: &WeylElt, i: usize) -> bool {
        !self.rs.is_positive(a.apply(self.simple_roots[i]))
    }

    /// `s_i a < a`.
    pub fn has_left_descent(&self, a: &WeylElt, i: usize) -> bool {
        let target = self.simple_roots[i];
        let pre = a.perm.iter().position(|&p| p as usize == target).unwrap();
        !self.rs.is_positive(pre)
    }

    /// The ShortLex-minimal reduced word, 0-based letters.
    pub fn reduced_word(&self, a: &WeylElt) -> Vec<usize> {
        a.word
            .get_or_init(|| {
                let mut word = Vec::new();
                let mut cur = a.clone();
                while let Some(i) = (0..self.rank()).find(|&i| self.has_left_descent(&cur, i)) {
                    word.push(i as u8);
                    cur = self.mul(&self.gens[i], &cur);
                }
                word.into_boxed_slice()
            })
            .iter()
            .map(|&i| i as usize)
            .collect()
    }

    /// `"s1 s2"` or `"e"`.
    pub fn format(&self, a: &WeylElt) -> String {
        let word = self.reduced_word(a);
        if word.is_empty() {
            return "e".into();
        }
        word.iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// ShortLex comparison: by length, then by reduced word.
    pub fn shortlex_cmp(&self, a: &WeylElt, b: &WeylElt) -> Ordering {
        let (wa, wb) = (self.reduced_word(a), self.reduced_word(b));
        wa.len().cmp(&wb.len()).then(wa.cmp(&wb))
    }

    pub fn sort_shortlex(&self, elts: &mut [WeylElt]) {
        elts.sort_by(|a, b| self.shortlex_cmp(a, b));
    }

    /// Bruhat order, walking down a reduced word of `b` with the lifting property.
    pub fn bruhat_leq(&self, a: &WeylElt, b: &WeylElt) -> bool {
        let (mut x, mut y) = (a.clone(), b.clone());
        loop {
            let (lx, ly) = (self.length(&x), self.length(&y));
            if lx > ly {
                return false;
            }
            if lx == ly {
                return x == y;
            }
            let i = (0..self.rank())
                .find(|&i| self.has_left_descent(&y, i))
                .expect("nonidentity element has a descent");
            y = self.mul(&self.gens[i], &y);
            if self.has_left_descent(&x, i) {
                x = self.mul(&self.gens[i], &x);
            }
        }
    }

    /// Simple reflections occurring in a reduced word.
    pub fn supp(&self, a: &WeylElt) -> NodeSet {
        let mut s = NodeSet::EMPTY;
        for i in self.reduced_word(a) {
            s.insert(i);
        }
        s
    }

    pub fn longest(&self) -> &WeylElt {
        &self.w0
    }

    /// `w^* = w0 w w0`.
    pub fn star(&self, a: &WeylElt) -> WeylElt {
        self.mul(&self.mul(&self.w0, a), &self.w0)
    }

    /// The diagram permutation `delta = -w0` on simple nodes.
    pub fn delta(&self, i: usize) -> usize {
        self.delta[i]
    }

    pub fn delta_set(&self, j: NodeSet) -> NodeSet {
        let mut out = NodeSet::EMPTY;
        for i in j.iter() {
            out.insert(self.delta[i]);
        }
        out
    }

    /// `a = u v` with `u` in `W^J` and `v` in `W_J`, lengths adding.
    pub fn coset_decompose(&self, a: &WeylElt, j: NodeSet) -> (WeylElt, WeylElt) {
        let mut u = a.clone();
        while let Some(i) = j.iter().find(|&i| self.has_right_descent(&u, i)) {
            u = self.mul(&u, &self.gens[i]);
        }
        let v = self.mul(&self.inv(&u), a);
        (u, v)
    }

    /// Whether `a` has no right descent in `J`.
    pub fn is_min_coset_rep(&self, a: &WeylElt, j: NodeSet) -> bool {
        j.iter().all(|i| !self.has_right_descent(a, i))
    }

    pub fn in_parabolic(&self, a: &WeylElt, j: NodeSet) -> bool {
        self.supp(a).is_subset(j)
    }

    /// All of `W^J`, in ShortLex order.
    pub fn min_coset_reps(&self, j: NodeSet) -> Result<Vec<WeylElt>> {
        self.check_enumeration("W^J enumeration")?;
        // W^J is closed under removing left descents, so grow it from e.
        let mut seen: HashSet<WeylElt> = HashSet::new();
        let mut queue = VecDeque::from([self.identity()]);
        seen.insert(self.identity());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank() {
                if self.has_left_descent(&w, i) {
                    continue;
                }
                let next = self.mul(&self.gens[i], &w);
                if self.is_min_coset_rep(&next, j) && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<WeylElt> = seen.into_iter().collect();
        self.sort_shortlex(&mut out);
        Ok(out)
    }

    /// All of the parabolic subgroup `W_J`, in ShortLex order.
    /// Guarded on `|J|` rather than on the rank of `W`.
    pub fn parabolic_elements(&self, j: NodeSet) -> Result<Vec<WeylElt>> {
        if j.len() > self.enumeration_rank {
            return Err(Error::Guard(format!(
                "W_J enumeration for |J| = {} > {}",
                j.len(),
                self.enumeration_rank
            )));
        }
        let mut seen: HashSet<WeylElt> = HashSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(w) = queue.pop_front() {
            for i in j.iter() {
                let next = self.mul(&w, &self.gens[i]);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<WeylElt> = seen.into_iter().collect();
        self.sort_shortlex(&mut out);
        Ok(out)
    }

    /// Every element of `W`, in ShortLex order.
    pub fn elements(&self) -> Result<Vec<WeylElt>> {
        self.min_coset_reps(NodeSet::EMPTY)
    }

    /// `I(J, x)`: the largest `K` in `J` with `x W_K x^-1 = W_K` generated
    /// simple-by-simple. Requires `x` in `W^J`.
    pub fn relative_i(&self, j: NodeSet, x: &WeylElt) -> Result<NodeSet> {
        if !self.is_min_coset_rep(x, j) {
            return Err(Error::Precondition(format!(
                "{} is not in W^{j}",
                self.format(x)
            )));
        }
        let xinv = self.inv(x);
        let mut k = j;
        loop {
            let drop = k.iter().find(|&i| {
                let c = self.mul(&self.mul(x, &self.gens[i]), &xinv);
                !k.iter().any(|jj| c == self.gens[jj])
            });
            match drop {
                Some(i) => k.remove(i),
                None => return Ok(k),
            }
        }
    }

    /// The dominant coweight `lambda` in the orbit of `mu`, with the unique
    /// `x` in `W^{I(lambda)}` such that `x lambda = mu`.
    pub fn dominant_with_witness(&self, mu: &Coweight) -> Result<(Coweight, WeylElt)> {
        self.rs.check_dim(mu)?;
        let mut nu = mu.clone();
        let mut x = self.identity();
        while let Some(i) = (0..self.rank()).find(|&i| nu.coords()[i] < 0) {
            nu = self.rs.reflect_coweight(i, &nu)?;
            x = self.mul(&x, &self.gens[i]);
        }
        let face = self.rs.i_lambda(&nu)?;
        let (x, _) = self.coset_decompose(&x, face);
        Ok((nu, x))
    }
}

impl fmt::Display for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({})", self.rs.label())
    }
}
