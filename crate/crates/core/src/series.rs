//! Sparse formal series over the index monoid with exact rational coefficients.
//!
//! Coefficients are kept as integer numerators over one common denominator,
//! which turns every convolution into integer arithmetic.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::filter::{CompiledFilter, TruncationFilter};
use crate::lattice::{Index, LatticeL0};
use crate::par::Execution;
use crate::rat::{self, Rat};

pub type TermMap = FxHashMap<Index, BigInt>;

#[derive(Clone, Debug)]
pub struct FormalSeries {
    lattice: Arc<LatticeL0>,
    den: BigInt,
    terms: TermMap,
    filter: TruncationFilter,
}

impl PartialEq for FormalSeries {
    fn eq(&self, other: &Self) -> bool {
        self.den == other.den && self.terms == other.terms
    }
}

/// Exact minima over the support.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportStats {
    pub a_min: Rat,
    pub c_min: Rat,
    pub wj_min: Vec<Rat>,
}

/// A rational relabelling `[a, b, c] -> [a + a_W, b + b_W, c + c_W]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shift {
    pub a: Rat,
    pub b: Vec<Rat>,
    pub c: Rat,
}

/// A possibly non-integral index produced by [`FormalSeries::shift`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftedIndex {
    pub a: Rat,
    pub c: Rat,
    pub b: Vec<Rat>,
}

impl Shift {
    pub fn zero(rank: usize) -> Self {
        Shift { a: Rat::zero(), b: vec![Rat::zero(); rank], c: Rat::zero() }
    }

    pub fn apply(&self, t: &Index) -> ShiftedIndex {
        ShiftedIndex {
            a: rat::int(t.a) + &self.a,
            c: rat::int(t.c) + &self.c,
            b: t.b.iter().zip(&self.b).map(|(x, y)| rat::int(*x) + y).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.c.is_integer() && self.b.iter().all(|x| x.is_integer())
    }
}

impl ShiftedIndex {
    pub fn from_index(t: &Index) -> Self {
        Shift::zero(t.b.len()).apply(t)
    }

    /// The integral index, if all coordinates are integers.
    pub fn to_index(&self) -> Option<Index> {
        let int = |r: &Rat| if r.is_integer() { r.to_integer().to_i64() } else { None };
        Some(Index { a: int(&self.a)?, c: int(&self.c)?, b: self.b.iter().map(int).collect::<Option<_>>()? })
    }

    pub fn to_json(&self) -> (serde_json::Value, serde_json::Value, serde_json::Value) {
        let v = |r: &Rat| match r.to_integer().to_i64() {
            Some(n) if r.is_integer() => serde_json::json!(n),
            _ => serde_json::json!(rat::format(r)),
        };
        (v(&self.a), serde_json::Value::Array(self.b.iter().map(v).collect()), v(&self.c))
    }
}

impl FormalSeries {
    pub fn zero(lattice: Arc<LatticeL0>) -> Self {
        FormalSeries { lattice, den: BigInt::one(), terms: TermMap::default(), filter: TruncationFilter::all() }
    }

    pub fn unit(lattice: Arc<LatticeL0>) -> Self {
        let r = lattice.rank();
        Self::from_integer_terms(lattice, [(Index::zero(r), BigInt::one())])
    }

    pub fn monomial(lattice: Arc<LatticeL0>, t: Index, coeff: Rat) -> Self {
        Self::from_terms(lattice, [(t, coeff)])
    }

    pub fn from_terms(lattice: Arc<LatticeL0>, terms: impl IntoIterator<Item = (Index, Rat)>) -> Self {
        let terms: Vec<(Index, Rat)> = terms.into_iter().collect();
        let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut map = TermMap::default();
        for (t, c) in terms {
            let n = (c * Rat::from_integer(den.clone())).to_integer();
            *map.entry(t).or_insert_with(BigInt::zero) += n;
        }
        Self::from_parts(lattice, den, map, TruncationFilter::all())
    }

    pub fn from_integer_terms(lattice: Arc<LatticeL0>, terms: impl IntoIterator<Item = (Index, BigInt)>) -> Self {
        let mut map = TermMap::default();
        for (t, c) in terms {
            *map.entry(t).or_insert_with(BigInt::zero) += c;
        }
        Self::from_parts(lattice, BigInt::one(), map, TruncationFilter::all())
    }

    pub(crate) fn from_parts(lattice: Arc<LatticeL0>, den: BigInt, terms: TermMap, filter: TruncationFilter) -> Self {
        let mut s = FormalSeries { lattice, den, terms, filter };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, v| !v.is_zero());
        if self.terms.is_empty() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for v in self.terms.values_mut() {
                *v = -&*v;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for v in self.terms.values() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
        self.den /= &g;
        for v in self.terms.values_mut() {
            *v /= &g;
        }
    }

    pub fn lattice(&self) -> &Arc<LatticeL0> {
        &self.lattice
    }

    pub fn filter(&self) -> &TruncationFilter {
        &self.filter
    }

    /// Attaches `filter`, dropping every term outside it.
    pub fn with_filter(mut self, filter: TruncationFilter) -> Self {
        let cf = filter.compile(&self.lattice);
        let lat = self.lattice.clone();
        self.terms.retain(|t, _| cf.contains(&lat, t));
        self.filter = filter;
        self.normalize();
        self
    }

    pub fn truncate(&self, filter: &TruncationFilter) -> Self {
        self.clone().with_filter(self.filter.intersect(filter))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn numerators(&self) -> &TermMap {
        &self.terms
    }

    pub fn coeff(&self, t: &Index) -> Rat {
        match self.terms.get(t) {
            Some(n) => Rat::new(n.clone(), self.den.clone()),
            None => Rat::zero(),
        }
    }

    pub fn indices(&self) -> impl Iterator<Item = &Index> {
        self.terms.keys()
    }

    /// Terms ordered lexicographically by `(a, c, b)`.
    pub fn sorted(&self) -> Vec<(Index, Rat)> {
        let mut v: Vec<(Index, Rat)> =
            self.terms.iter().map(|(t, n)| (t.clone(), Rat::new(n.clone(), self.den.clone()))).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        v
    }

    pub fn add(&self, other: &FormalSeries) -> FormalSeries {
        let den = self.den.lcm(&other.den);
        let f1 = &den / &self.den;
        let f2 = &den / &other.den;
        let mut terms: TermMap = self.terms.iter().map(|(t, v)| (t.clone(), v * &f1)).collect();
        for (t, v) in &other.terms {
            *terms.entry(t.clone()).or_insert_with(BigInt::zero) += v * &f2;
        }
        let filter = self.filter.intersect(&other.filter);
        let s = Self::from_parts(self.lattice.clone(), den, terms, TruncationFilter::all());
        s.with_filter(filter)
    }

    pub fn scale(&self, r: &Rat) -> FormalSeries {
        if r.is_zero() {
            return Self::zero(self.lattice.clone());
        }
        let terms = self.terms.iter().map(|(t, v)| (t.clone(), v * r.numer())).collect();
        Self::from_parts(self.lattice.clone(), &self.den * r.denom(), terms, self.filter.clone())
    }

    /// Convolution restricted to `out_filter`.
    pub fn multiply(&self, other: &FormalSeries, out_filter: &TruncationFilter, exec: Execution) -> FormalSeries {
        let cf = out_filter.compile(&self.lattice);
        let terms = convolve(&self.lattice, &self.terms, &other.terms, &cf, exec);
        Self::from_parts(self.lattice.clone(), &self.den * &other.den, terms, out_filter.clone())
    }

    /// `sum_{k <= k_max} x^k / k!` restricted to `out_filter`.
    ///
    /// Intermediate powers are truncated to `out_filter`, which is sound when
    /// adding a support index of `x` can never bring an index back into the
    /// filter (true for the monotone bounds used by the product engine).
    pub fn exp_partial(&self, k_max: u64, out_filter: &TruncationFilter, exec: Execution) -> Result<FormalSeries> {
        let r = self.lattice.rank();
        if self.terms.contains_key(&Index::zero(r)) {
            return Err(Error::Contract("exp_partial of a series with constant term".into()));
        }
        let unit = Self::unit(self.lattice.clone()).with_filter(out_filter.clone());
        let mut acc = unit.clone();
        let mut power = unit;
        for k in 1..=k_max {
            power = power.multiply(self, out_filter, exec).scale(&rat::frac(1, k as i64));
            if power.is_empty() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.with_filter(out_filter.clone()))
    }

    /// Truncation of `(1 - e^t)^exponent`.
    pub fn geometric_power(
        lattice: Arc<LatticeL0>,
        t: &Index,
        exponent: &BigInt,
        out_filter: &TruncationFilter,
    ) -> Result<FormalSeries> {
        if !lattice.is_positive(t) {
            return Err(Error::Contract(format!("geometric_power needs a positive index, got {t}")));
        }
        let cf = out_filter.compile(&lattice);
        let cap = cf.multiple_cap(&lattice, t);
        let k_max: i64 = match (exponent.is_negative(), cap) {
            (false, Some(c)) => exponent.to_i64().map_or(c, |e| e.min(c)),
            (false, None) => exponent
                .to_i64()
                .ok_or_else(|| Error::Contract("geometric_power exponent too large for an unbounded filter".into()))?,
            (true, Some(c)) => c,
            (true, None) => {
                return Err(Error::Contract(format!("filter does not bound the multiples of {t}")));
            }
        };
        let mut terms = TermMap::default();
        let zero = Index::zero(lattice.rank());
        if cf.contains(&lattice, &zero) {
            terms.insert(zero, BigInt::one());
        }
        let mut g = BigInt::one();
        for k in 1..=k_max {
            // binom(e, k) (-1)^k from the previous term
            g = g * (BigInt::from(k - 1) - exponent) / BigInt::from(k);
            if g.is_zero() {
                break;
            }
            let kt = t.scale(k);
            if cf.contains(&lattice, &kt) {
                terms.insert(kt, g.clone());
            }
        }
        Ok(Self::from_parts(lattice, BigInt::one(), terms, out_filter.clone()))
    }

    pub fn support_stats(&self) -> Result<SupportStats> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or_else(|| Error::Degenerate("support statistics of an empty series".into()))?;
        let lat = &self.lattice;
        let lam = |t: &Index| -> Vec<Rat> { (0..lat.rank()).map(|j| lat.lambda(j, &t.b)).collect() };
        let (mut a, mut c, mut w) = (first.a, first.c, lam(first));
        for t in it {
            a = a.min(t.a);
            c = c.min(t.c);
            for (x, y) in w.iter_mut().zip(lam(t)) {
                if y < *x {
                    *x = y;
                }
            }
        }
        Ok(SupportStats { a_min: rat::int(a), c_min: rat::int(c), wj_min: w })
    }

    /// Relabels every index by `by`; coefficients are untouched.
    pub fn shift(&self, by: &Shift) -> Vec<(ShiftedIndex, Rat)> {
        let mut v: Vec<(ShiftedIndex, Rat)> =
            self.terms.iter().map(|(t, n)| (by.apply(t), Rat::new(n.clone(), self.den.clone()))).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.sorted()
                .iter()
                .map(|(t, c)| serde_json::json!({"a": t.a, "b": t.b.to_vec(), "c": t.c, "coeff": rat::format(c)}))
                .collect(),
        )
    }
}

/// Core convolution kernel: `sum_{t1 + t2 = t} x(t1) y(t2)` for `t` in the filter.
pub(crate) fn convolve(lattice: &LatticeL0, x: &TermMap, y: &TermMap, f: &CompiledFilter, exec: Execution) -> TermMap {
    let (outer, inner) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    if outer.is_empty() {
        return TermMap::default();
    }
    let mut inner_v: Vec<(&Index, &BigInt)> = inner.iter().collect();
    inner_v.sort_unstable_by_key(|p| (p.0.c, p.0.a));
    // buckets of equal c, each sorted by a
    let mut buckets: Vec<(i64, usize, usize)> = Vec::new();
    for (i, (t, _)) in inner_v.iter().enumerate() {
        match buckets.last_mut() {
            Some(b) if b.0 == t.c => b.2 = i + 1,
            _ => buckets.push((t.c, i, i + 1)),
        }
    }
    let outer_v: Vec<(&Index, &BigInt)> = outer.iter().collect();
    let work = |chunk: &[(&Index, &BigInt)]| -> TermMap {
        let mut acc = TermMap::default();
        for (t1, x1) in chunk {
            for &(c2, lo, hi) in &buckets {
                let c = t1.c + c2;
                if c > f.c_hi {
                    break;
                }
                if c < f.c_lo {
                    continue;
                }
                let a_lim = f.a_hi_at(c);
                if a_lim == i64::MIN {
                    continue;
                }
                let a_lim = a_lim.saturating_sub(t1.a);
                for (t2, x2) in &inner_v[lo..hi] {
                    if t2.a > a_lim {
                        break;
                    }
                    let t = t1.add(t2);
                    if !f.contains(lattice, &t) {
                        continue;
                    }
                    let p = *x1 * *x2;
                    match acc.get_mut(&t) {
                        Some(v) => *v += p,
                        None => {
                            acc.insert(t, p);
                        }
                    }
                }
            }
        }
        acc
    };
    exec.map_reduce(&outer_v, work, merge_maps)
}

pub(crate) fn merge_maps(a: TermMap, b: TermMap) -> TermMap {
    let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    for (t, v) in small {
        match big.get_mut(&t) {
            Some(w) => *w += v,
            None => {
                big.insert(t, v);
            }
        }
    }
    big
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat() -> Arc<LatticeL0> {
        Arc::new(LatticeL0::hermitian_d3())
    }

    fn idx(a: i64, c: i64) -> Index {
        Index::new(a, &[0, 0], c)
    }

    fn below(n: i64) -> TruncationFilter {
        TruncationFilter::box_below(rat::int(n), rat::int(n))
    }

    #[test]
    fn addition() {
        let l = lat();
        let s = FormalSeries::monomial(l.clone(), idx(1, 1), rat::int(1));
        assert_eq!(s.add(&FormalSeries::zero(l.clone())), s);
        assert!(s.add(&s.scale(&rat::int(-1))).is_empty());
        let u = FormalSeries::monomial(l.clone(), idx(1, 2), rat::int(3));
        let w = s.scale(&rat::int(2)).add(&u);
        assert_eq!(w.coeff(&idx(1, 1)), rat::int(2));
        assert_eq!(w.coeff(&idx(1, 2)), rat::int(3));
    }

    #[test]
    fn binomial_square() {
        let l = lat();
        let s = FormalSeries::from_terms(l.clone(), [(idx(1, 1), rat::int(-1)), (idx(0, 0), rat::int(1))]);
        let sq = s.multiply(&s, &TruncationFilter::all(), Execution::Sequential);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&idx(1, 1)), rat::int(-2));
        assert_eq!(sq.coeff(&idx(2, 2)), rat::int(1));
        let unit = FormalSeries::unit(l.clone());
        assert_eq!(unit.multiply(&s, &below(1), Execution::Sequential), s.truncate(&below(1)));
    }

    #[test]
    fn exponential() {
        let l = lat();
        let e = FormalSeries::zero(l.clone()).exp_partial(5, &below(3), Execution::Sequential).unwrap();
        assert_eq!(e, FormalSeries::unit(l.clone()));
        let x = FormalSeries::monomial(l.clone(), idx(1, 1), rat::int(2));
        let e = x.exp_partial(2, &below(3), Execution::Sequential).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.coeff(&idx(2, 2)), rat::int(2));
        assert!(FormalSeries::unit(l).exp_partial(2, &below(3), Execution::Sequential).is_err());
    }

    #[test]
    fn geometric_powers() {
        let l = lat();
        let t = idx(0, 1);
        let one = FormalSeries::geometric_power(l.clone(), &t, &BigInt::from(1), &below(5)).unwrap();
        assert_eq!(one.sorted(), vec![(idx(0, 0), rat::int(1)), (idx(0, 1), rat::int(-1))]);
        let inv = FormalSeries::geometric_power(l.clone(), &t, &BigInt::from(-1), &below(3)).unwrap();
        assert_eq!(inv.len(), 3);
        assert!(inv.sorted().iter().all(|(_, c)| *c == rat::int(1)));
        let sq = FormalSeries::geometric_power(l.clone(), &t, &BigInt::from(-2), &below(3)).unwrap();
        let coeffs: Vec<Rat> = sq.sorted().into_iter().map(|(_, c)| c).collect();
        assert_eq!(coeffs, vec![rat::int(1), rat::int(2), rat::int(3)]);
        assert!(FormalSeries::geometric_power(l.clone(), &idx(0, 0), &BigInt::from(1), &below(3)).is_err());
        assert!(FormalSeries::geometric_power(l, &Index::new(0, &[0, -1], 0), &BigInt::from(-1), &below(3)).is_err());
    }

    #[test]
    fn stats_and_shift() {
        let l = lat();
        let s = FormalSeries::from_terms(
            l.clone(),
            [(Index::new(2, &[1, 0], 3), rat::int(5)), (Index::new(1, &[0, -1], 4), rat::int(7))],
        );
        let st = s.support_stats().unwrap();
        assert_eq!(st.a_min, rat::int(1));
        assert_eq!(st.c_min, rat::int(3));
        assert_eq!(st.wj_min, vec![rat::int(0), rat::int(-1)]);
        assert!(FormalSeries::zero(l.clone()).support_stats().is_err());
        let u = FormalSeries::unit(l.clone()).support_stats().unwrap();
        assert_eq!(u.wj_min, vec![rat::int(0), rat::int(0)]);
        let m = FormalSeries::monomial(l, idx(1, 1), rat::int(4));
        let sh = m.shift(&Shift { a: rat::int(1), b: vec![rat::int(0), rat::int(0)], c: rat::int(1) });
        assert_eq!(sh[0].0.to_index(), Some(idx(2, 2)));
    }
}
