//! The extended affine Weyl group `W~ = W x| Y`.
//!
//! An [`AffineElt`] with finite part `w` and translation part `chi` stands for
//! `w e^chi`, so that `(w e^chi)(w' e^chi') = ww' e^(w'^-1 chi + chi')`.
//! The affine simple reflection is `s0 = e^(theta^v) s_theta = s_theta e^(-theta^v)`.
//!
//! Length is the number of affine root hyperplanes separating the base alcove
//! from its image:
//!
//! ```text
//! l(w e^chi) = sum over alpha > 0 of  |<chi, alpha>|      if w alpha > 0
//!                                     |<chi, alpha> + 1|  if w alpha < 0
//! ```
//!
//! which gives `l(s0) = 1` and `l(e^lambda) = <lambda, 2 rho>` for dominant
//! `lambda`. The oracle module checks it against word lengths.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{checked_add, Error, Result};
use crate::rootsys::{CartanType, Coweight, NodeSet, RootSystem};
use crate::weyl::{WeylElt, WeylGroup};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElt {
    pub fin: WeylElt,
    pub trans: Coweight,
}

/// A letter of the Coxeter alphabet `S~ = {s0} + S` of `W_a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Affine,
    Simple(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Affine => f.write_str("s0"),
            Letter::Simple(i) => write!(f, "s{}", i + 1),
        }
    }
}

/// `x e^(-lambda) y^-1` with `lambda` dominant, `J = I(lambda)` and `x` in `W^J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub j: NodeSet,
    pub lambda: Coweight,
    pub x: WeylElt,
    pub y: WeylElt,
}

#[derive(Debug, Clone)]
pub struct AffineWeylGroup {
    w: WeylGroup,
    s0: AffineElt,
}

impl AffineWeylGroup {
    pub fn new(w: WeylGroup) -> Result<AffineWeylGroup> {
        let rs = w.root_system();
        let mut theta_word = Vec::new();
        // s_theta as an element: reflect theta down to a simple root and conjugate.
        let mut cur = rs.theta();
        while rs.height(cur) > 1 {
            let i = (0..rs.rank())
                .find(|&i| rs.height(rs.reflect_root(i, cur)) < rs.height(cur))
                .expect("non-simple positive roots have a lowering reflection");
            theta_word.push(i);
            cur = rs.reflect_root(i, cur);
        }
        let j = rs.root(cur).iter().position(|&c| c == 1).unwrap();
        let mut word = theta_word.clone();
        word.push(j);
        word.extend(theta_word.iter().rev());
        let s_theta = w.from_word(&word)?;
        let s0 = AffineElt {
            fin: s_theta,
            trans: rs.theta_coroot().checked_neg()?,
        };
        Ok(AffineWeylGroup { w, s0 })
    }

    pub fn from_type(kind: CartanType, rank: usize) -> Result<AffineWeylGroup> {
        AffineWeylGroup::new(WeylGroup::from_type(kind, rank)?)
    }

    pub fn with_guard_override(self, lift: bool) -> AffineWeylGroup {
        AffineWeylGroup {
            w: self.w.with_guard_override(lift),
            s0: self.s0,
        }
    }

    pub fn finite(&self) -> &WeylGroup {
        &self.w
    }

    pub fn root_system(&self) -> &RootSystem {
        self.w.root_system()
    }

    pub fn rank(&self) -> usize {
        self.w.rank()
    }

    pub fn identity(&self) -> AffineElt {
        self.from_finite(self.w.identity())
    }

    pub fn from_finite(&self, w: WeylElt) -> AffineElt {
        AffineElt {
            fin: w,
            trans: Coweight::zero(self.rank()),
        }
    }

    /// `e^chi`.
    pub fn translation(&self, chi: Coweight) -> Result<AffineElt> {
        self.root_system().check_dim(&chi)?;
        Ok(AffineElt {
            fin: self.w.identity(),
            trans: chi,
        })
    }

    pub fn s0(&self) -> &AffineElt {
        &self.s0
    }

    pub fn letter(&self, l: Letter) -> AffineElt {
        match l {
            Letter::Affine => self.s0.clone(),
            Letter::Simple(i) => self.from_finite(self.w.simple(i)),
        }
    }

    /// Every letter of `S~`, `s0` first.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        std::iter::once(Letter::Affine).chain((0..self.rank()).map(Letter::Simple))
    }

    pub fn mul(&self, a: &AffineElt, b: &AffineElt) -> Result<AffineElt> {
        let moved = self.w.act(&self.w.inv(&b.fin), &a.trans)?;
        Ok(AffineElt {
            fin: self.w.mul(&a.fin, &b.fin),
            trans: moved.checked_add(&b.trans)?,
        })
    }

    /// `(w e^chi)^-1 = w^-1 e^(-w chi)`.
    pub fn inv(&self, a: &AffineElt) -> Result<AffineElt> {
        Ok(AffineElt {
            fin: self.w.inv(&a.fin),
            trans: self.w.act(&a.fin, &a.trans)?.checked_neg()?,
        })
    }

    /// `s_i a s_i` for a finite simple reflection.
    pub fn conj_simple(&self, i: usize, a: &AffineElt) -> Result<AffineElt> {
        Ok(AffineElt {
            fin: self.w.conj_simple(i, &a.fin),
            trans: self.root_system().reflect_coweight(i, &a.trans)?,
        })
    }

    /// `u a u^-1` for `u` in `W`.
    pub fn conj_by(&self, u: &WeylElt, a: &AffineElt) -> Result<AffineElt> {
        Ok(AffineElt {
            fin: self.w.mul(&self.w.mul(u, &a.fin), &self.w.inv(u)),
            trans: self.w.act(u, &a.trans)?,
        })
    }

    /// `s_i a`.
    pub fn left_simple(&self, i: usize, a: &AffineElt) -> AffineElt {
        AffineElt {
            fin: self.w.mul(&self.w.simple(i), &a.fin),
            trans: a.trans.clone(),
        }
    }

    pub fn left_letter(&self, l: Letter, a: &AffineElt) -> Result<AffineElt> {
        match l {
            Letter::Simple(i) => Ok(self.left_simple(i, a)),
            Letter::Affine => self.mul(&self.s0, a),
        }
    }

    pub fn right_letter(&self, a: &AffineElt, l: Letter) -> Result<AffineElt> {
        self.mul(a, &self.letter(l))
    }

    /// Iwahori-Matsumoto length.
    pub fn length(&self, a: &AffineElt) -> Result<u64> {
        let rs = self.root_system();
        rs.check_dim(&a.trans)?;
        let mut total = 0i64;
        for k in 0..rs.num_positive() {
            let p = rs.pair(&a.trans, k)?;
            let term = if rs.is_positive(a.fin.apply(k)) {
                p
            } else {
                checked_add(p, 1)?
            };
            total = checked_add(total, term.checked_abs().ok_or(Error::Overflow)?)?;
        }
        Ok(total as u64)
    }

    pub fn has_left_descent(&self, a: &AffineElt, l: Letter) -> Result<bool> {
        Ok(self.length(&self.left_letter(l, a)?)? < self.length(a)?)
    }

    pub fn has_right_descent(&self, a: &AffineElt, l: Letter) -> Result<bool> {
        Ok(self.length(&self.right_letter(a, l)?)? < self.length(a)?)
    }

    /// Whether the translation part lies in the coroot lattice, i.e. `a` is in `W_a`.
    pub fn in_affine_subgroup(&self, a: &AffineElt) -> bool {
        self.root_system().in_coroot_lattice(&a.trans)
    }

    /// Whether `a` and `b` lie in the same coset of `W_a`.
    pub fn same_omega_coset(&self, a: &AffineElt, b: &AffineElt) -> Result<bool> {
        let q = self.mul(&self.inv(a)?, b)?;
        Ok(self.in_affine_subgroup(&q))
    }

    /// Writes `a` as `x e^(-lambda) y^-1`.
    pub fn normalize(&self, a: &AffineElt) -> Result<NormalForm> {
        let mu = self.w.act(&a.fin, &a.trans)?.checked_neg()?;
        let (lambda, x) = self.w.dominant_with_witness(&mu)?;
        let y = self.w.mul(&self.w.inv(&a.fin), &x);
        let j = self.root_system().i_lambda(&lambda)?;
        Ok(NormalForm { j, lambda, x, y })
    }

    /// `x e^(-lambda) y^-1`.
    pub fn compose(&self, x: &WeylElt, lambda: &Coweight, y: &WeylElt) -> Result<AffineElt> {
        let t = self.translation(lambda.checked_neg()?)?;
        let left = self.mul(&self.from_finite(x.clone()), &t)?;
        self.mul(&left, &self.from_finite(self.w.inv(y)))
    }

    pub fn recompose(&self, nf: &NormalForm) -> Result<AffineElt> {
        self.compose(&nf.x, &nf.lambda, &nf.y)
    }

    /// Membership in `W~^S`, the minimal representatives of `W~ / W`.
    pub fn is_s_minimal(&self, a: &AffineElt) -> Result<bool> {
        Ok(self.normalize(a)?.y.is_identity())
    }

    /// `a = w1 v` with `w1` in `W~^S` and `v` in `W`.
    pub fn split_s(&self, a: &AffineElt) -> Result<(AffineElt, WeylElt)> {
        let nf = self.normalize(a)?;
        let w1 = AffineElt {
            fin: nf.x.clone(),
            trans: nf.lambda.checked_neg()?,
        };
        Ok((w1, self.w.inv(&nf.y)))
    }

    /// Reduced word over `S~` by greedy left descents (smallest letter first,
    /// `s0` before `s1`), and the length-zero remainder: `a = word * tau`.
    pub fn reduced_word(&self, a: &AffineElt) -> Result<(Vec<Letter>, AffineElt)> {
        let mut word = Vec::new();
        let mut cur = a.clone();
        let mut len = self.length(&cur)?;
        'outer: while len > 0 {
            for l in self.letters() {
                let next = self.left_letter(l, &cur)?;
                let nl = self.length(&next)?;
                if nl < len {
                    word.push(l);
                    cur = next;
                    len = nl;
                    continue 'outer;
                }
            }
            return Err(Error::Invariant("positive length without a descent".into()));
        }
        Ok((word, cur))
    }

    /// Bruhat order on `W~`; elements of different `W_a`-cosets are incomparable.
    pub fn bruhat_leq(&self, a: &AffineElt, b: &AffineElt) -> Result<bool> {
        if !self.same_omega_coset(a, b)? {
            return Ok(false);
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        let (mut lx, mut ly) = (self.length(&x)?, self.length(&y)?);
        loop {
            if lx > ly {
                return Ok(false);
            }
            if lx == ly {
                return Ok(x == y);
            }
            let mut stepped = false;
            for l in self.letters() {
                let ny = self.left_letter(l, &y)?;
                let nly = self.length(&ny)?;
                if nly < ly {
                    let nx = self.left_letter(l, &x)?;
                    let nlx = self.length(&nx)?;
                    if nlx < lx {
                        x = nx;
                        lx = nlx;
                    }
                    y = ny;
                    ly = nly;
                    stepped = true;
                    break;
                }
            }
            if !stepped {
                return Err(Error::Invariant("positive length without a descent".into()));
            }
        }
    }

    /// `I(J, w)` for `w` in `W~^J`.
    pub fn relative_i(&self, j: NodeSet, w: &AffineElt) -> Result<NodeSet> {
        for i in j.iter() {
            if self.has_right_descent(w, Letter::Simple(i))? {
                return Err(Error::Precondition(format!(
                    "{} has a right descent in {j}",
                    self.format(w)
                )));
            }
        }
        let winv = self.inv(w)?;
        let mut k = j;
        loop {
            let mut drop = None;
            for i in k.iter() {
                let c = self.mul(&self.mul(w, &self.letter(Letter::Simple(i)))?, &winv)?;
                let simple = c.trans.is_zero()
                    && k.iter().any(|jj| c.fin == self.w.simple(jj));
                if !simple {
                    drop = Some(i);
                    break;
                }
            }
            match drop {
                Some(i) => k.remove(i),
                None => return Ok(k),
            }
        }
    }

    /// `"s2 s1 t[0,-628,-628]"`: the finite word followed by the translation.
    pub fn format(&self, a: &AffineElt) -> String {
        let fin = self.w.format(&a.fin);
        match (a.fin.is_identity(), a.trans.is_zero()) {
            (_, true) => fin,
            (true, false) => format!("t{}", a.trans),
            (false, false) => format!("{fin} t{}", a.trans),
        }
    }

    pub fn format_normal_form(&self, nf: &NormalForm) -> String {
        format!(
            "x={}; lambda={}; y={}",
            self.w.format(&nf.x),
            nf.lambda,
            self.w.format(&nf.y)
        )
    }

    /// Parses product notation such as `"s2 s1 t[-1,0] s2"`, `"s0 s1"` or `"e"`.
    pub fn parse(&self, text: &str) -> Result<AffineElt> {
        let mut cleaned = String::with_capacity(text.len());
        let mut depth = 0usize;
        for ch in text.chars() {
            match ch {
                '[' => {
                    depth += 1;
                    cleaned.push(ch);
                }
                ']' => {
                    depth = depth.saturating_sub(1);
                    cleaned.push(ch);
                }
                c if c.is_whitespace() && depth > 0 => {}
                c => cleaned.push(c),
            }
        }
        let mut out = self.identity();
        for tok in cleaned.split_whitespace() {
            let factor = if tok == "e" || tok == "1" {
                continue;
            } else if tok == "s0" {
                self.s0.clone()
            } else if let Some(body) = tok.strip_prefix('t') {
                self.translation(Coweight::parse(body)?)?
            } else {
                self.from_finite(self.w.parse_word(tok)?)
            };
            out = self.mul(&out, &factor)?;
        }
        Ok(out)
    }

    /// Parses `"x=s2 s1; y=s3 s2; lambda=0,628,628"` into `x e^(-lambda) y^-1`.
    pub fn parse_triple(&self, text: &str) -> Result<AffineElt> {
        let (mut x, mut y, mut lambda) = (None, None, None);
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "x" => x = Some(self.w.parse_word(val)?),
                "y" => y = Some(self.w.parse_word(val)?),
                "lambda" => lambda = Some(Coweight::parse(val)?),
                k => return Err(Error::Parse(format!("unknown key {k:?}"))),
            }
        }
        let lambda = lambda.ok_or_else(|| Error::Parse("missing lambda".into()))?;
        self.compose(
            &x.unwrap_or_else(|| self.w.identity()),
            &lambda,
            &y.unwrap_or_else(|| self.w.identity()),
        )
    }

    /// Either notation accepted by [`parse`](Self::parse) or [`parse_triple`](Self::parse_triple).
    pub fn parse_any(&self, text: &str) -> Result<AffineElt> {
        if text.contains('=') {
            self.parse_triple(text)
        } else {
            self.parse(text)
        }
    }
}
