//! The positive definite lattice L0, its dual, discriminant group, index
//! triples `[a, b, c]` and the Weyl chamber order on them.
//!
//! Dual vectors are integer coordinate vectors with respect to a fixed basis
//! of L0^#.  The quadratic form on these coordinates is stored as an integer
//! matrix `Q` with a common denominator, so that `q(b) = b^T Q b / qden`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rat::{self, Rat};

pub type Coords = SmallVec<[i64; 4]>;

/// Canonical representative of an element of L0^# / L0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiscElement {
    pub coords: Coords,
}

/// A triple `[a, b, c]` with integral `a`, `c` and `b` in dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub a: i64,
    pub c: i64,
    pub b: Coords,
}

impl Index {
    pub fn new(a: i64, b: &[i64], c: i64) -> Self {
        Index { a, c, b: Coords::from_slice(b) }
    }

    pub fn zero(rank: usize) -> Self {
        Index { a: 0, c: 0, b: smallvec::smallvec![0; rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.c == 0 && self.b.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Index) -> Index {
        Index { a: self.a + other.a, c: self.c + other.c, b: self.b.iter().zip(&other.b).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, m: i64) -> Index {
        Index { a: self.a * m, c: self.c * m, b: self.b.iter().map(|x| x * m).collect() }
    }

    pub fn neg(&self) -> Index {
        self.scale(-1)
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},(", self.a)?;
        for (i, x) in self.b.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "),{}]", self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    A,
    B,
    C,
    D,
    /// `a = c = 0`, first nonvanishing functional (0-based) is positive.
    E(usize),
    NotPositive,
}

/// A chamber functional `lambda(b) = num . b / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional {
    pub num: Vec<i64>,
    pub den: i64,
}

impl Functional {
    pub fn from_rationals(coeffs: &[Rat]) -> Self {
        let den = coeffs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(den.clone())).to_integer().to_i64().expect("functional too large"))
            .collect();
        Functional { num, den: den.to_i64().expect("functional too large") }
    }

    pub fn eval_num(&self, b: &[i64]) -> i64 {
        self.num.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn eval(&self, b: &[i64]) -> Rat {
        rat::frac(self.eval_num(b), self.den)
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        self.num.iter().map(|&n| rat::frac(n, self.den)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct LatticeL0 {
    name: Option<String>,
    gram: Vec<Vec<i64>>,
    lattice_in_dual: Vec<Vec<i64>>,
    hnf: Vec<Vec<i64>>,
    qmat: Vec<Vec<i64>>,
    qden: i64,
    chamber: Vec<Functional>,
    disc_reps: Vec<DiscElement>,
}

pub const HERMITIAN_D3: &str = "hermitian-d3";

impl LatticeL0 {
    /// Lattice with the given Gram matrix; dual coordinates refer to the dual
    /// basis of the Gram basis.
    pub fn from_gram(gram: Vec<Vec<i64>>, chamber: Vec<Vec<Rat>>) -> Result<Self> {
        check_gram(&gram)?;
        let r = gram.len();
        let g: Vec<Vec<Rat>> = gram.iter().map(|row| row.iter().map(|&x| rat::int(x)).collect()).collect();
        let (inv, _) = invert(&g).ok_or_else(|| Error::Input("singular gram matrix".into()))?;
        // q(b) = b^T G^{-1} b / 2
        let half: Vec<Vec<Rat>> = inv.iter().map(|row| row.iter().map(|x| x / rat::int(2)).collect()).collect();
        let (qmat, qden) = integralize(&half);
        Self::assemble(None, gram.clone(), gram, qmat, qden, chamber, r)
    }

    /// The Eisenstein lattice with dual basis `1/sqrt(-3), (1 + sqrt(-3))/2`.
    pub fn hermitian_d3() -> Self {
        let chamber = vec![vec![rat::int(0), rat::int(-1)], vec![rat::int(-1), rat::int(0)]];
        Self::assemble(
            Some(HERMITIAN_D3.to_string()),
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![3, 2], vec![0, 1]],
            vec![vec![2, -3], vec![-3, 6]],
            6,
            chamber,
            2,
        )
        .expect("preset is valid")
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            HERMITIAN_D3 => Ok(Self::hermitian_d3()),
            _ => Err(Error::Input(format!("unknown lattice preset {name:?}"))),
        }
    }

    fn assemble(
        name: Option<String>,
        gram: Vec<Vec<i64>>,
        lattice_in_dual: Vec<Vec<i64>>,
        qmat: Vec<Vec<i64>>,
        qden: i64,
        chamber: Vec<Vec<Rat>>,
        r: usize,
    ) -> Result<Self> {
        if chamber.len() != r || chamber.iter().any(|f| f.len() != r) {
            return Err(Error::Input(format!("chamber must consist of {r} functionals of length {r}")));
        }
        let (_, det) =
            invert(&chamber).ok_or_else(|| Error::Input("chamber functionals are linearly dependent".into()))?;
        debug_assert!(!det.is_zero());
        let chamber: Vec<Functional> = chamber.iter().map(|f| Functional::from_rationals(f)).collect();
        let hnf = hnf_upper(&lattice_in_dual);
        let mut disc_reps = vec![Coords::new()];
        for row in hnf.iter().enumerate().map(|(i, row)| row[i]) {
            let (lo, hi) = sym_range(row);
            disc_reps = disc_reps
                .into_iter()
                .flat_map(|p| {
                    (lo..=hi).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let mut disc_reps: Vec<DiscElement> = disc_reps.into_iter().map(|coords| DiscElement { coords }).collect();
        disc_reps.sort();
        let det_gram =
            determinant(&gram.iter().map(|row| row.iter().map(|&x| rat::int(x)).collect()).collect::<Vec<_>>());
        if rat::int(disc_reps.len() as i64) != det_gram {
            return Err(Error::Input("discriminant group size does not match det(gram)".into()));
        }
        Ok(LatticeL0 { name, gram, lattice_in_dual, hnf, qmat, qden, chamber, disc_reps })
    }

    /// Parses `{"gram": [[..]], "chamber": [[..]]}` or a preset name.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        if let Some(name) = v.as_str() {
            return Self::preset(name);
        }
        if let Some(name) = v.get("preset").and_then(|p| p.as_str()) {
            return Self::preset(name);
        }
        let gram = v
            .get("gram")
            .and_then(|g| g.as_array())
            .ok_or_else(|| Error::Schema("lattice descriptor needs \"gram\"".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Schema("gram rows must be arrays".into()))?
                    .iter()
                    .map(|x| x.as_i64().ok_or_else(|| Error::Schema("gram entries must be integers".into())))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let chamber = match v.get("chamber") {
            Some(c) => c
                .as_array()
                .ok_or_else(|| Error::Schema("chamber must be an array".into()))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Schema("chamber rows must be arrays".into()))?
                        .iter()
                        .map(rat::parse_json)
                        .collect::<Result<Vec<Rat>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            None => (0..gram.len()).map(|i| (0..gram.len()).map(|j| rat::int((i == j) as i64)).collect()).collect(),
        };
        Self::from_gram(gram, chamber)
    }

    pub fn to_json(&self) -> serde_json::Value {
        if let Some(name) = &self.name {
            return serde_json::json!({ "preset": name });
        }
        serde_json::json!({
            "gram": self.gram,
            "chamber": self.chamber.iter().map(|f| f.coeffs().iter().map(rat::format).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn chamber(&self) -> &[Functional] {
        &self.chamber
    }

    pub fn disc_reps(&self) -> &[DiscElement] {
        &self.disc_reps
    }

    /// Rows are a basis of L0 in dual coordinates.
    pub fn lattice_basis(&self) -> &[Vec<i64>] {
        &self.lattice_in_dual
    }

    pub fn qden(&self) -> i64 {
        self.qden
    }

    /// `q(b) * qden`, an integer.
    pub fn qnum(&self, b: &[i64]) -> i128 {
        let mut s: i128 = 0;
        for (i, row) in self.qmat.iter().enumerate() {
            let bi = b[i] as i128;
            if bi == 0 {
                continue;
            }
            let mut t: i128 = 0;
            for (j, &q) in row.iter().enumerate() {
                t += q as i128 * b[j] as i128;
            }
            s += bi * t;
        }
        s
    }

    pub fn quadratic_value(&self, b: &[i64]) -> Result<Rat> {
        self.check_dim(b)?;
        Ok(Rat::new(BigInt::from(self.qnum(b)), BigInt::from(self.qden)))
    }

    fn check_dim(&self, b: &[i64]) -> Result<()> {
        if b.len() != self.rank() {
            return Err(Error::Input(format!("expected {} coordinates, got {}", self.rank(), b.len())));
        }
        Ok(())
    }

    /// `disc(t) * qden = a c qden - qnum(b)`.
    pub fn disc_num(&self, t: &Index) -> i128 {
        t.a as i128 * t.c as i128 * self.qden as i128 - self.qnum(&t.b)
    }

    pub fn disc_index(&self, t: &Index) -> Rat {
        Rat::new(BigInt::from(self.disc_num(t)), BigInt::from(self.qden))
    }

    pub fn lambda(&self, j: usize, b: &[i64]) -> Rat {
        self.chamber[j].eval(b)
    }

    /// Minimal positive value of `lambda_j` on dual vectors.
    pub fn epsilon(&self, j: usize) -> Rat {
        let f = &self.chamber[j];
        let g = f.num.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        rat::frac(g, f.den)
    }

    /// Whether `b` is positive with respect to the chamber; returns the first
    /// functional that does not vanish on `b` if it is positive there.
    pub fn positive_functional(&self, b: &[i64]) -> Option<usize> {
        for (j, f) in self.chamber.iter().enumerate() {
            let v = f.eval_num(b);
            if v > 0 {
                return Some(j);
            }
            if v < 0 {
                return None;
            }
        }
        None
    }

    pub fn classify(&self, t: &Index) -> Region {
        if t.c > 0 {
            if t.a <= 0 {
                Region::C
            } else if self.disc_num(t) > 0 {
                Region::A
            } else {
                Region::B
            }
        } else if t.c == 0 && t.a > 0 {
            Region::D
        } else if t.c == 0 && t.a == 0 {
            match self.positive_functional(&t.b) {
                Some(j) => Region::E(j),
                None => Region::NotPositive,
            }
        } else {
            Region::NotPositive
        }
    }

    pub fn is_positive(&self, t: &Index) -> bool {
        self.classify(t) != Region::NotPositive
    }

    /// All dual vectors with `qnum(b) <= nmax`, lexicographically sorted.
    pub fn vectors_up_to(&self, nmax: i128) -> Vec<Coords> {
        if nmax < 0 {
            return Vec::new();
        }
        let mut out = if self.rank() == 2 { self.enumerate_rank2(nmax) } else { self.enumerate_fp(nmax) };
        out.sort();
        out
    }

    pub fn short_dual_vectors(&self, bound: &Rat) -> Vec<Coords> {
        let n = bound * Rat::from_integer(BigInt::from(self.qden));
        self.vectors_up_to(n.floor().to_integer().to_i128().unwrap_or(i128::MAX))
    }

    fn enumerate_rank2(&self, nmax: i128) -> Vec<Coords> {
        let (a, b, c) = (self.qmat[0][0] as i128, self.qmat[0][1] as i128, self.qmat[1][1] as i128);
        let det = a * c - b * b;
        // a x^2 + 2 b x y + c y^2 = a (x + b y / a)^2 + det y^2 / a
        let ymax = rat::isqrt_u128((a * nmax / det) as u128) as i128 + 1;
        let mut out = Vec::new();
        for y in -ymax..=ymax {
            let d = b * b * y * y - a * (c * y * y - nmax);
            if d < 0 {
                continue;
            }
            let s = rat::isqrt_u128(d as u128) as i128 + 1;
            let lo = (-b * y - s).div_euclid(a);
            let hi = (-b * y + s).div_euclid(a) + 1;
            for x in lo..=hi {
                if a * x * x + 2 * b * x * y + c * y * y <= nmax {
                    out.push(Coords::from_slice(&[x as i64, y as i64]));
                }
            }
        }
        out
    }

    #[allow(clippy::needless_range_loop)]
    fn enumerate_fp(&self, nmax: i128) -> Vec<Coords> {
        let r = self.rank();
        // q = sum_i d_i (b_i + sum_{j > i} mu_ij b_j)^2
        let mut m: Vec<Vec<f64>> = self.qmat.iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect();
        let mut d = vec![0.0; r];
        let mut mu = vec![vec![0.0; r]; r];
        for i in 0..r {
            d[i] = m[i][i];
            for j in i + 1..r {
                mu[i][j] = m[i][j] / d[i];
            }
            for j in i + 1..r {
                for k in i + 1..r {
                    m[j][k] -= mu[i][j] * m[i][k];
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = vec![0i64; r];
        self.fp_rec(r, nmax, nmax as f64, &d, &mu, &mut cur, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn fp_rec(
        &self,
        i: usize,
        nmax: i128,
        budget: f64,
        d: &[f64],
        mu: &[Vec<f64>],
        cur: &mut Vec<i64>,
        out: &mut Vec<Coords>,
    ) {
        if i == 0 {
            if self.qnum(cur) <= nmax {
                out.push(Coords::from_slice(cur));
            }
            return;
        }
        let k = i - 1;
        let center: f64 = -(k + 1..cur.len()).map(|j| mu[k][j] * cur[j] as f64).sum::<f64>();
        let width = (budget.max(0.0) / d[k]).sqrt() * (1.0 + 1e-9) + 1e-6;
        let lo = (center - width).floor() as i64;
        let hi = (center + width).ceil() as i64;
        for x in lo..=hi {
            let dev = x as f64 - center;
            let used = d[k] * dev * dev;
            if used > budget * (1.0 + 1e-9) + 1e-6 {
                continue;
            }
            cur[k] = x;
            self.fp_rec(k, nmax, budget - used, d, mu, cur, out);
        }
        cur[k] = 0;
    }

    /// Upper bound for `|lambda_j(b)|` over dual vectors with `q(b) < bound`.
    ///
    /// Exact for rank at most 2.  In higher rank the Cauchy-Schwarz bound
    /// `|n . b|^2 <= (b^T Q b)(n^T Q^{-1} n)` is used.
    pub fn w_j_max(&self, j: usize, bound: &Rat) -> Rat {
        if !bound.is_positive() {
            return Rat::zero();
        }
        let f = &self.chamber[j];
        let scaled = bound * Rat::from_integer(BigInt::from(self.qden));
        let nmax = scaled.ceil().to_integer().to_i128().unwrap_or(i128::MAX) - 1;
        if self.rank() <= 2 {
            let best = self.vectors_up_to(nmax).iter().map(|b| f.eval_num(b).abs()).max().unwrap_or(0);
            return rat::frac(best, f.den);
        }
        self.real_lambda_bound(j, bound)
    }

    /// Upper bound for `|lambda_j(v)|` over real vectors with `q(v) <= bound`,
    /// from `|n . v|^2 <= (v^T Q v)(n^T Q^{-1} n)`.
    pub fn real_lambda_bound(&self, j: usize, bound: &Rat) -> Rat {
        if !bound.is_positive() {
            return Rat::zero();
        }
        let f = &self.chamber[j];
        let scaled = bound * Rat::from_integer(BigInt::from(self.qden));
        let q: Vec<Vec<Rat>> = self.qmat.iter().map(|row| row.iter().map(|&x| rat::int(x)).collect()).collect();
        let (qinv, _) = invert(&q).expect("quadratic form is definite");
        let n: Vec<Rat> = f.num.iter().map(|&x| rat::int(x)).collect();
        let mut nqn = Rat::zero();
        for i in 0..n.len() {
            for k in 0..n.len() {
                nqn += &n[i] * &qinv[i][k] * &n[k];
            }
        }
        Rat::from_integer(rat::ceil_sqrt(&(scaled * nqn))) / rat::int(f.den)
    }

    pub fn reduce_disc(&self, b: &[i64]) -> DiscElement {
        let mut v: Vec<i64> = b.to_vec();
        for (i, row) in self.hnf.iter().enumerate() {
            let h = row[i];
            let (lo, _) = sym_range(h);
            let k = (v[i] - lo).div_euclid(h);
            if k != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= k * y;
                }
            }
        }
        DiscElement { coords: Coords::from_vec(v) }
    }

    /// Position of `reduce_disc(b)` in `disc_reps`.
    pub fn disc_position(&self, b: &[i64]) -> usize {
        let r = self.reduce_disc(b);
        self.disc_reps.binary_search(&r).expect("reduced vectors are representatives")
    }

    pub fn is_reduced(&self, b: &[i64]) -> bool {
        self.reduce_disc(b).coords.as_slice() == b
    }

    /// `true` if `b` lies in L0.
    pub fn in_lattice(&self, b: &[i64]) -> bool {
        self.reduce_disc(b).coords.iter().all(|&x| x == 0)
    }
}

fn sym_range(h: i64) -> (i64, i64) {
    // representatives in (-h/2, h/2]
    (-((h - 1) / 2), h / 2)
}

#[allow(clippy::needless_range_loop)]
fn check_gram(g: &[Vec<i64>]) -> Result<()> {
    let r = g.len();
    if r == 0 {
        return Err(Error::Input("gram matrix must be nonempty".into()));
    }
    for (i, row) in g.iter().enumerate() {
        if row.len() != r {
            return Err(Error::Input("gram matrix must be square".into()));
        }
        if row[i] % 2 != 0 {
            return Err(Error::Input("gram matrix must have even diagonal".into()));
        }
        for j in 0..r {
            if g[i][j] != g[j][i] {
                return Err(Error::Input("gram matrix must be symmetric".into()));
            }
        }
    }
    for k in 1..=r {
        let sub: Vec<Vec<Rat>> = (0..k).map(|i| (0..k).map(|j| rat::int(g[i][j])).collect()).collect();
        if !determinant(&sub).is_positive() {
            return Err(Error::Input("gram matrix must be positive definite".into()));
        }
    }
    Ok(())
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = rat::int(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for i in col + 1..n {
            let f = &a[i][col] / &a[col][col];
            for j in col..n {
                let v = &f * &a[col][j];
                a[i][j] -= v;
            }
        }
    }
    det
}

#[allow(clippy::needless_range_loop)]
/// Inverse and determinant of a square rational matrix.
pub(crate) fn invert(m: &[Vec<Rat>]) -> Option<(Vec<Vec<Rat>>, Rat)> {
    let n = m.len();
    let det = determinant(m);
    if det.is_zero() {
        return None;
    }
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| rat::int((i == j) as i64)));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(p, col);
        let piv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let v = &f * &a[col][j];
                    a[i][j] -= v;
                }
            }
        }
    }
    Some((a.into_iter().map(|row| row[n..].to_vec()).collect(), det))
}

/// Writes a symmetric rational matrix as integer matrix over a common denominator.
fn integralize(m: &[Vec<Rat>]) -> (Vec<Vec<i64>>, i64) {
    let den = m.iter().flatten().fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let d = Rat::from_integer(den.clone());
    let q = m
        .iter()
        .map(|row| row.iter().map(|x| (x * &d).to_integer().to_i64().expect("gram too large")).collect())
        .collect();
    (q, den.to_i64().expect("gram too large"))
}

/// Upper triangular basis (positive diagonal) of the row lattice of `m`.
fn hnf_upper(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = m.len();
    let mut a = m.to_vec();
    for col in 0..r {
        loop {
            let p = (col..r)
                .filter(|&i| a[i][col] != 0)
                .min_by_key(|&i| a[i][col].abs())
                .expect("lattice basis is nonsingular");
            a.swap(col, p);
            let mut clean = true;
            for i in col + 1..r {
                if a[i][col] != 0 {
                    let q = a[i][col] / a[col][col];
                    let pivot = a[col].clone();
                    for (x, y) in a[i].iter_mut().zip(&pivot) {
                        *x -= q * y;
                    }
                    clean &= a[i][col] == 0;
                }
            }
            if clean {
                break;
            }
        }
        if a[col][col] < 0 {
            for x in a[col].iter_mut() {
                *x = -*x;
            }
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d3() -> LatticeL0 {
        LatticeL0::hermitian_d3()
    }

    #[test]
    fn quadratic_values() {
        let l = d3();
        assert_eq!(l.quadratic_value(&[0, 0]).unwrap(), rat::int(0));
        assert_eq!(l.quadratic_value(&[1, 0]).unwrap(), rat::frac(1, 3));
        assert_eq!(l.quadratic_value(&[3, 2]).unwrap(), rat::int(1));
        assert!(l.quadratic_value(&[1]).is_err());
    }

    #[test]
    fn discriminants() {
        let l = d3();
        assert_eq!(l.disc_index(&Index::new(0, &[0, 0], 0)), rat::int(0));
        assert_eq!(l.disc_index(&Index::new(3, &[3, 2], 4)), rat::int(11));
        assert_eq!(l.disc_index(&Index::new(1, &[1, 0], 0)), rat::frac(-1, 3));
    }

    #[test]
    fn regions() {
        let l = d3();
        assert_eq!(l.classify(&Index::new(1, &[0, 0], 1)), Region::A);
        assert_eq!(l.classify(&Index::new(0, &[0, -1], 0)), Region::E(0));
        assert_eq!(l.classify(&Index::new(0, &[-1, 0], 0)), Region::E(1));
        assert_eq!(l.classify(&Index::new(0, &[3, 2], 1)), Region::C);
        assert_eq!(l.classify(&Index::new(1, &[3, 2], 1)), Region::B);
        assert_eq!(l.classify(&Index::new(2, &[3, 2], 0)), Region::D);
        assert_eq!(l.classify(&Index::new(0, &[0, 0], 0)), Region::NotPositive);
        assert_eq!(l.classify(&Index::new(0, &[1, 0], 0)), Region::NotPositive);
    }

    #[test]
    fn short_vectors() {
        let l = d3();
        assert_eq!(l.short_dual_vectors(&rat::int(0)), vec![Coords::from_slice(&[0, 0])]);
        assert_eq!(l.short_dual_vectors(&rat::frac(1, 3)).len(), 7);
        assert_eq!(l.short_dual_vectors(&rat::frac(1, 4)).len(), 1);
        let roots: Vec<_> = l.short_dual_vectors(&rat::int(1)).into_iter().filter(|b| l.qnum(b) == 6).collect();
        assert_eq!(roots.len(), 6);
        assert!(roots.iter().all(|b| l.in_lattice(b)));
    }

    #[test]
    fn fincke_pohst_matches_rank2_box() {
        let l = d3();
        for n in [0, 1, 5, 17, 60] {
            let mut a = l.enumerate_fp(n);
            a.sort();
            assert_eq!(a, l.vectors_up_to(n));
        }
    }

    #[test]
    fn w_max_values() {
        let l = d3();
        assert_eq!(l.w_j_max(0, &rat::frac(1, 4)), rat::int(0));
        // q(3, 2) = 1 and lambda_1(3, 2) = -2
        assert_eq!(l.w_j_max(0, &rat::frac(4, 3)), rat::int(2));
        assert_eq!(l.w_j_max(0, &rat::frac(1, 2)), rat::int(1));
        assert_eq!(l.w_j_max(1, &rat::frac(4, 3)), rat::int(3));
        assert_eq!(l.epsilon(0), rat::int(1));
        assert_eq!(l.epsilon(1), rat::int(1));
    }

    #[test]
    fn reduction() {
        let l = d3();
        assert_eq!(l.reduce_disc(&[2, 3]).coords.as_slice(), &[-1, 0]);
        assert_eq!(l.reduce_disc(&[0, 0]).coords.as_slice(), &[0, 0]);
        assert_eq!(l.reduce_disc(&[1, 0]).coords.as_slice(), &[1, 0]);
        let reps: Vec<_> = l.disc_reps().iter().map(|d| d.coords.to_vec()).collect();
        assert_eq!(reps, vec![vec![-1, 0], vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn gram_descriptor() {
        let json = serde_json::json!({"gram": [[2, 1], [1, 2]], "chamber": [["1", "0"], ["0", "1"]]});
        let l = LatticeL0::from_json(&json).unwrap();
        assert_eq!(l.disc_reps().len(), 3);
        // the dual basis vector has norm 1/3 in A2^#
        assert_eq!(l.quadratic_value(&[1, 0]).unwrap(), rat::frac(1, 3));
        let l7 = LatticeL0::from_gram(
            vec![vec![2, -1], vec![-1, 4]],
            vec![vec![rat::int(1), rat::int(0)], vec![rat::int(0), rat::int(1)]],
        )
        .unwrap();
        assert_eq!(l7.disc_reps().len(), 7);
        assert!(LatticeL0::from_gram(vec![vec![1]], vec![vec![rat::int(1)]]).is_err());
        assert!(LatticeL0::from_gram(
            vec![vec![2, 3], vec![3, 2]],
            vec![vec![rat::int(1), rat::int(0)], vec![rat::int(0), rat::int(1)]]
        )
        .is_err());
    }

    #[test]
    fn rank3_enumeration_and_estimate() {
        let c = |i: usize| (0..3).map(|j| rat::int((i == j) as i64)).collect::<Vec<_>>();
        let l = LatticeL0::from_gram(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], vec![c(0), c(1), c(2)])
            .unwrap();
        assert_eq!(l.disc_reps().len(), 4);
        let bound = rat::int(2);
        let exact = l
            .short_dual_vectors(&bound)
            .iter()
            .filter(|b| l.quadratic_value(b).unwrap() < bound)
            .map(|b| l.lambda(0, b).abs())
            .max()
            .unwrap();
        assert!(l.w_j_max(0, &bound) >= exact);
    }
}
