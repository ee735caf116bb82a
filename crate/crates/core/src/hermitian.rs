//! Fourier indices of Hermitian modular forms over the Eisenstein integers.
//!
//! An index `[a, b, c]` with `b = b1 / sqrt(-3) + b2 (1 + sqrt(-3)) / 2` is the
//! binary Hermitian form `((a, b), (conj b, c))`.  Internally `b` is carried as
//! `gamma = sqrt(-3) b`, an element of `Z[w]` with `w = (-1 + sqrt(-3)) / 2`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::engine::ProductResult;
use crate::error::{Error, Result};
use crate::lattice::{Index, LatticeL0, HERMITIAN_D3};
use crate::rat::Rat;

/// `x + y w` with `w^2 = -1 - w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eisenstein {
    pub x: i64,
    pub y: i64,
}

impl Eisenstein {
    pub const ZERO: Eisenstein = Eisenstein { x: 0, y: 0 };
    pub const ONE: Eisenstein = Eisenstein { x: 1, y: 0 };
    pub const W: Eisenstein = Eisenstein { x: 0, y: 1 };
    /// `sqrt(-3) = 1 + 2w`.
    pub const SQRT_M3: Eisenstein = Eisenstein { x: 1, y: 2 };

    pub const fn new(x: i64, y: i64) -> Self {
        Eisenstein { x, y }
    }

    pub fn scale(self, k: i64) -> Self {
        Eisenstein::new(self.x * k, self.y * k)
    }

    pub fn conj(self) -> Self {
        Eisenstein::new(self.x - self.y, -self.y)
    }

    pub fn norm(self) -> i64 {
        self.x * self.x - self.x * self.y + self.y * self.y
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    pub fn units() -> [Eisenstein; 6] {
        let w = Eisenstein::W;
        let w2 = w * w;
        [Eisenstein::ONE, w, w2, -Eisenstein::ONE, -w, -w2]
    }

    /// All elements of norm at most `r`.
    pub fn up_to_norm(r: i64) -> Vec<Eisenstein> {
        let mut out = Vec::new();
        if r < 0 {
            return out;
        }
        // x^2 - x y + y^2 >= 3 y^2 / 4
        let ymax = ((4 * r) as f64 / 3.0).sqrt() as i64 + 1;
        for y in -ymax..=ymax {
            let disc = 4 * r - 3 * y * y;
            if disc < 0 {
                continue;
            }
            let s = (disc as f64).sqrt() as i64 + 1;
            for x in (y - s) / 2 - 1..=(y + s) / 2 + 1 {
                let z = Eisenstein::new(x, y);
                if z.norm() <= r {
                    out.push(z);
                }
            }
        }
        out
    }
}

impl Add for Eisenstein {
    type Output = Eisenstein;
    fn add(self, o: Self) -> Self {
        Eisenstein::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Eisenstein {
    type Output = Eisenstein;
    fn sub(self, o: Self) -> Self {
        Eisenstein::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Eisenstein {
    type Output = Eisenstein;
    fn neg(self) -> Self {
        Eisenstein::new(-self.x, -self.y)
    }
}

impl Mul for Eisenstein {
    type Output = Eisenstein;
    fn mul(self, o: Self) -> Self {
        Eisenstein::new(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x - self.y * o.y)
    }
}

/// A 2x2 matrix over the Eisenstein integers.
pub type Mat = [[Eisenstein; 2]; 2];

fn mat_mul(p: &Mat, q: &Mat) -> Mat {
    let e = |i: usize, j: usize| p[i][0] * q[0][j] + p[i][1] * q[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

const IDENTITY: Mat = [[Eisenstein::ONE, Eisenstein::ZERO], [Eisenstein::ZERO, Eisenstein::ONE]];

/// A Fourier index as the quadruple `(a, b1, b2, c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HermitianIndex {
    pub a: i64,
    pub b1: i64,
    pub b2: i64,
    pub c: i64,
}

impl fmt::Display for HermitianIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{}]", self.a, self.b1, self.b2, self.c)
    }
}

impl HermitianIndex {
    pub fn new(a: i64, b1: i64, b2: i64, c: i64) -> Self {
        HermitianIndex { a, b1, b2, c }
    }

    pub fn from_index(t: &Index) -> Result<Self> {
        match t.b.as_slice() {
            [b1, b2] => Ok(HermitianIndex::new(t.a, *b1, *b2, t.c)),
            _ => Err(Error::Input(format!("{t} is not a rank 2 index"))),
        }
    }

    pub fn to_index(&self) -> Index {
        Index::new(self.a, &[self.b1, self.b2], self.c)
    }

    fn gamma(&self) -> Eisenstein {
        Eisenstein::new(self.b1 - self.b2, self.b2)
    }

    fn from_gamma(a: i64, g: Eisenstein, c: i64) -> Self {
        HermitianIndex::new(a, g.x + g.y, g.y, c)
    }

    /// `3 q(b) = b1^2 - 3 b1 b2 + 3 b2^2`.
    pub fn q3(&self) -> i64 {
        self.gamma().norm()
    }

    /// `3 disc = 3 a c - 3 q(b)`.
    pub fn disc3(&self) -> i64 {
        3 * self.a * self.c - self.q3()
    }

    pub fn disc(&self) -> Rat {
        Rat::new(BigInt::from(self.disc3()), BigInt::from(3))
    }

    pub fn is_semidefinite(&self) -> bool {
        self.a >= 0 && self.c >= 0 && self.disc3() >= 0
    }

    pub fn is_definite(&self) -> bool {
        self.a > 0 && self.disc3() > 0
    }

    /// `T[v] = v* T v`.
    pub fn value(&self, v: [Eisenstein; 2]) -> i64 {
        self.a * v[0].norm() + (v[0].conj() * self.gamma() * v[1]).y + self.c * v[1].norm()
    }

    /// `conj(U)^tr T U`.
    pub fn transform(&self, u: &Mat) -> Self {
        let (x, y) = ([u[0][0], u[1][0]], [u[0][1], u[1][1]]);
        let g = self.gamma();
        let inner = (x[0].conj() * y[0]).scale(self.a) + (x[1].conj() * y[1]).scale(self.c);
        let g2 = Eisenstein::SQRT_M3 * inner + x[0].conj() * y[1] * g - x[1].conj() * y[0] * g.conj();
        HermitianIndex::from_gamma(self.value(x), g2, self.value(y))
    }
}

/// Coordinates of the complex conjugate of `b`.
pub fn conjugate_b(b: (i64, i64)) -> (i64, i64) {
    (-b.0 + 3 * b.1, b.1)
}

/// `U` and its determinant for a reduction `t -> conj(U)^tr t U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transform {
    pub matrix: Mat,
    pub det: Eisenstein,
}

impl Transform {
    pub fn identity() -> Self {
        Transform { matrix: IDENTITY, det: Eisenstein::ONE }
    }

    fn from_matrix(m: Mat) -> Self {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        Transform { matrix: m, det }
    }

    fn then(&self, m: &Mat) -> Self {
        Transform::from_matrix(mat_mul(&self.matrix, m))
    }

    /// `det(conj U)^k`, a sixth root of unity.
    pub fn character(&self, k: i64) -> Eisenstein {
        let d = self.det.conj();
        let mut out = Eisenstein::ONE;
        for _ in 0..k.rem_euclid(6) {
            out = out * d;
        }
        out
    }
}

/// Generators of `GL_2` over the Eisenstein integers.
pub fn generators() -> Vec<Mat> {
    let (o, z, w) = (Eisenstein::ONE, Eisenstein::ZERO, Eisenstein::W);
    vec![[[o, o], [z, o]], [[o, w], [z, o]], [[o, -o], [z, o]], [[z, o], [o, z]], [[o, z], [z, w]], [[o, z], [z, -o]]]
}

/// Canonical representative of the orbit of a semi-definite index.
///
/// The representative minimizes `(a, c, b1, b2)` lexicographically over the
/// orbit.  Singular indices reduce to `[0, 0, 0, n]`.
pub fn gl2_orbit_reduce(t: &HermitianIndex) -> Result<(HermitianIndex, Transform)> {
    if !t.is_semidefinite() {
        return Err(Error::Contract(format!("{t} is not positive semi-definite")));
    }
    let (g, tr) = gauss_reduce(t);
    if g.a == 0 {
        return Ok((g, tr));
    }
    // enumerate bases (v, w) with T[v] minimal and T[w] <= c
    let min_vecs = short_vectors(&g, g.a);
    let second = short_vectors(&g, g.c);
    let mut best = (g, tr);
    for v in min_vecs.iter().filter(|v| g.value(**v) == g.a) {
        for w in &second {
            let m: Mat = [[v[0], w[0]], [v[1], w[1]]];
            let cand = Transform::from_matrix(m);
            if !cand.det.is_unit() {
                continue;
            }
            let r = g.transform(&m);
            if (r.a, r.c, r.b1, r.b2) < (best.0.a, best.0.c, best.0.b1, best.0.b2) {
                best = (r, tr.then(&m));
            }
        }
    }
    Ok(best)
}

/// Gauss reduction: `|b| / a` minimal under translations and `a <= c`.
fn gauss_reduce(t: &HermitianIndex) -> (HermitianIndex, Transform) {
    let mut cur = *t;
    let mut tr = Transform::identity();
    loop {
        if cur.a == 0 {
            // semi-definite with a = 0 forces b = 0
            if cur.c != 0 || cur.q3() != 0 {
                return (cur, tr);
            }
            return (cur, tr);
        }
        // translation by lambda changes gamma by a lambda sqrt(-3)
        let step = Eisenstein::SQRT_M3.scale(cur.a);
        let mut lam = Eisenstein::ZERO;
        let mut best = cur.q3();
        loop {
            let mut improved = false;
            for u in Eisenstein::units() {
                let l = lam + u;
                let n = (cur.gamma() + l * step).norm();
                if n < best {
                    best = n;
                    lam = l;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if lam != Eisenstein::ZERO {
            let m: Mat = [[Eisenstein::ONE, lam], [Eisenstein::ZERO, Eisenstein::ONE]];
            cur = cur.transform(&m);
            tr = tr.then(&m);
        }
        if cur.c < cur.a {
            let m: Mat = [[Eisenstein::ZERO, Eisenstein::ONE], [Eisenstein::ONE, Eisenstein::ZERO]];
            cur = cur.transform(&m);
            tr = tr.then(&m);
        } else {
            return (cur, tr);
        }
    }
}

/// Nonzero vectors with `T[v] <= bound` for a definite form.
fn short_vectors(t: &HermitianIndex, bound: i64) -> Vec<[Eisenstein; 2]> {
    // T[v] = a |v1 + beta v2 / a|^2 + (disc / a) |v2|^2 with 3 disc = disc3
    let (a, d3) = (t.a, t.disc3());
    let n2 = (3 * bound * a) / d3;
    let beta_over_a = (t.q3() as f64 / 3.0).sqrt() / a as f64;
    let mut out = Vec::new();
    for v2 in Eisenstein::up_to_norm(n2) {
        let r = (bound as f64 / a as f64).sqrt() + beta_over_a * (v2.norm() as f64).sqrt();
        for v1 in Eisenstein::up_to_norm((r * r).ceil() as i64 + 1) {
            let v = [v1, v2];
            if (v1, v2) != (Eisenstein::ZERO, Eisenstein::ZERO) && t.value(v) <= bound {
                out.push(v);
            }
        }
    }
    out
}

/// All indices reachable from `t` by words of length at most `depth` in
/// [`generators`] and their inverses.
pub fn orbit_enumerate(t: &HermitianIndex, depth: usize) -> BTreeSet<HermitianIndex> {
    let mut gens = generators();
    let o = Eisenstein::ONE;
    let z = Eisenstein::ZERO;
    gens.push([[o, -Eisenstein::W], [z, o]]);
    gens.push([[o, z], [z, Eisenstein::W * Eisenstein::W]]);
    let mut seen = BTreeSet::from([*t]);
    let mut queue = VecDeque::from([(*t, 0usize)]);
    while let Some((s, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for g in &gens {
            let n = s.transform(g);
            if seen.insert(n) {
                queue.push_back((n, d + 1));
            }
        }
    }
    seen
}

fn hermitian_keys(r: &ProductResult) -> Result<Vec<(HermitianIndex, &BigInt)>> {
    if r.lattice().name() != Some(HERMITIAN_D3) {
        return Err(Error::Input("expansion is not over the hermitian-d3 lattice".into()));
    }
    r.coefficients
        .iter()
        .map(|(k, v)| {
            let t = k.to_index().ok_or_else(|| Error::Input("non-integral index in a Hermitian expansion".into()))?;
            Ok((HermitianIndex::from_index(&t)?, v))
        })
        .collect()
}

/// `n -> sum` of the coefficients with `a + c = n`, for `n < B`.
///
/// Sums over the definite indices and the singular indices `[n, 0, 0, 0]`,
/// the index set on which the expansion is stored after orbit reduction.
pub fn restrict_diagonal(r: &ProductResult) -> Result<BTreeMap<i64, BigInt>> {
    restrict_with(r, |t| t.is_definite() || (t.c == 0 && t.b1 == 0 && t.b2 == 0))
}

/// Like [`restrict_diagonal`] but over every stored semi-definite index.
pub fn restrict_diagonal_full(r: &ProductResult) -> Result<BTreeMap<i64, BigInt>> {
    restrict_with(r, |_| true)
}

fn restrict_with(r: &ProductResult, keep: impl Fn(&HermitianIndex) -> bool) -> Result<BTreeMap<i64, BigInt>> {
    let mut out: BTreeMap<i64, BigInt> = (0..r.precision).map(|n| (n, BigInt::zero())).collect();
    for (t, v) in hermitian_keys(r)? {
        let n = t.a + t.c;
        if n < r.precision && keep(&t) {
            *out.get_mut(&n).expect("n is in range") += v;
        }
    }
    Ok(out)
}

/// Coefficients of `Delta^k = q^k prod (1 - q^n)^{24 k}` below `q^prec`.
pub fn delta_power(k: u32, prec: usize) -> BTreeMap<i64, BigInt> {
    let mut series = vec![BigInt::zero(); prec];
    if (k as usize) < prec {
        series[k as usize] = BigInt::from(1);
    }
    for n in 1..prec {
        for _ in 0..24 * k {
            // multiply by (1 - q^n) in place
            for i in (n..prec).rev() {
                let s = series[i - n].clone();
                series[i] -= s;
            }
        }
    }
    series.into_iter().enumerate().map(|(i, v)| (i as i64, v)).collect()
}

/// Size of the stored index set for the window `0 <= a, c < B`: every
/// definite index plus the singular indices `[n, 0, 0, 0]`.
pub fn count_coefficients(r: &ProductResult) -> Result<usize> {
    if r.lattice().name() != Some(HERMITIAN_D3) {
        return Err(Error::Input("expansion is not over the hermitian-d3 lattice".into()));
    }
    Ok(count_indices(r.lattice(), r.precision))
}

/// Definite indices with `0 <= a, c < B`, plus `B`.
pub fn count_indices(lat: &LatticeL0, big_b: i64) -> usize {
    if big_b <= 0 {
        return 0;
    }
    let vs = lat.vectors_up_to((big_b - 1) as i128 * (big_b - 1) as i128 * lat.qden() as i128);
    let mut n = big_b as usize;
    for a in 1..big_b {
        for c in 1..big_b {
            n += vs.iter().filter(|b| HermitianIndex::new(a, b[0], b[1], c).disc3() > 0).count();
        }
    }
    n
}

/// Orbit count for the window `0 <= a, c < B`.
pub fn count_orbits(lat: &LatticeL0, big_b: i64) -> Result<usize> {
    if big_b <= 0 {
        return Ok(0);
    }
    let mut reps = BTreeSet::new();
    let vs = lat.vectors_up_to((big_b - 1) as i128 * (big_b - 1) as i128 * lat.qden() as i128);
    for a in 0..big_b {
        for c in 0..big_b {
            for b in &vs {
                let t = HermitianIndex::new(a, b[0], b[1], c);
                if t.is_semidefinite() {
                    reps.insert(gl2_orbit_reduce(&t)?.0);
                }
            }
        }
    }
    Ok(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_arithmetic() {
        let w = Eisenstein::W;
        assert_eq!(w * w * w, Eisenstein::ONE);
        assert_eq!(Eisenstein::SQRT_M3.norm(), 3);
        assert_eq!(Eisenstein::SQRT_M3 * Eisenstein::SQRT_M3, Eisenstein::new(-3, 0));
        assert_eq!(Eisenstein::up_to_norm(1).len(), 7);
    }

    #[test]
    fn norm_form_matches_lattice() {
        let l = LatticeL0::hermitian_d3();
        for b1 in -6..6 {
            for b2 in -6..6 {
                let t = HermitianIndex::new(0, b1, b2, 0);
                assert_eq!(t.q3() as i128 * 2, l.qnum(&[b1, b2]));
            }
        }
    }

    #[test]
    fn conjugation() {
        assert_eq!(conjugate_b((0, 0)), (0, 0));
        assert_eq!(conjugate_b((3, 2)), (3, 2));
        assert_eq!(conjugate_b(conjugate_b((5, -7))), (5, -7));
    }

    #[test]
    fn swap_and_reduce() {
        let t = HermitianIndex::new(4, 3, 2, 3);
        let s = t.transform(&[[Eisenstein::ZERO, Eisenstein::ONE], [Eisenstein::ONE, Eisenstein::ZERO]]);
        assert_eq!(s, HermitianIndex::new(3, 3, 2, 4));
        assert_eq!(gl2_orbit_reduce(&t).unwrap().0, gl2_orbit_reduce(&s).unwrap().0);
        let (r, tr) = gl2_orbit_reduce(&t).unwrap();
        assert_eq!(t.transform(&tr.matrix), r);
        assert!(tr.det.is_unit());
    }

    #[test]
    fn singular_forms() {
        let (r, _) = gl2_orbit_reduce(&HermitianIndex::new(1, 3, 2, 1)).unwrap();
        assert_eq!(r, HermitianIndex::new(0, 0, 0, 1));
        let (r, _) = gl2_orbit_reduce(&HermitianIndex::new(5, 0, 0, 0)).unwrap();
        assert_eq!(r, HermitianIndex::new(0, 0, 0, 5));
        assert!(gl2_orbit_reduce(&HermitianIndex::new(1, 3, 2, 0)).is_err());
    }

    #[test]
    fn index_counts() {
        let l = LatticeL0::hermitian_d3();
        assert_eq!(count_indices(&l, 1), 1);
        // a = c = 1: q(b) < 1 has the zero vector and the six vectors of norm 1/3
        assert_eq!(count_indices(&l, 2), 2 + 7);
        assert_eq!(count_orbits(&l, 2).unwrap(), 2 + 2);
    }

    #[test]
    fn delta_powers() {
        let d1 = delta_power(1, 5);
        assert_eq!(d1[&0], BigInt::zero());
        assert_eq!(d1[&1], BigInt::from(1));
        assert_eq!(d1[&2], BigInt::from(-24));
        assert_eq!(d1[&3], BigInt::from(252));
        assert_eq!(d1[&4], BigInt::from(-1472));
        let d9 = delta_power(9, 11);
        assert_eq!(d9[&9], BigInt::from(1));
        assert_eq!(d9[&10], BigInt::from(-216));
    }
}
