//! Truncation filters: decidable predicates on indices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::lattice::{Index, LatticeL0, Region};
use crate::rat::{self, Rat};

/// Conjunction of bounds on `a`, `c`, the chamber functionals and the region.
///
/// Upper bounds on `a` and `c` are strict, all others are inclusive.
#[derive(Clone, Debug, Default)]
pub struct TruncationFilter {
    pub a_max: Option<Rat>,
    pub c_max: Option<Rat>,
    pub a_min: Option<Rat>,
    pub c_min: Option<Rat>,
    pub wj_max: Option<Vec<Rat>>,
    pub wj_min: Option<Vec<Rat>>,
    pub region: Option<Region>,
    pub constraints: Vec<Arc<Constraint>>,
}

#[derive(Clone, Debug)]
pub enum Constraint {
    /// `a <= a_hi[c - c0]`; indices with `c` outside the table are rejected.
    Profile {
        c0: i64,
        a_hi: Vec<i64>,
    },
    Norm(NormBound),
}

/// Bound on `q(b + shift)` depending on `(a, c)`.
///
/// Stores, per `(a, c)` in a box, the largest admissible value of
/// `qnum(shift_den * b + shift_num)`; negative entries reject.
#[derive(Clone, Debug)]
pub struct NormBound {
    shift_num: Vec<i64>,
    shift_den: i64,
    a0: i64,
    c0: i64,
    a_len: usize,
    c_len: usize,
    table: Vec<i128>,
}

impl NormBound {
    /// `radius(a, c)` must return an upper bound for `sqrt(q(b + shift))` over
    /// all admissible indices with these `a` and `c`, or `None` to reject them.
    pub fn new(
        lattice: &LatticeL0,
        shift: &[Rat],
        a_range: (i64, i64),
        c_range: (i64, i64),
        radius: impl Fn(i64, i64) -> Option<f64>,
    ) -> Self {
        let den = shift.iter().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
        let shift_den = den.to_i64().expect("shift denominator too large");
        let shift_num = shift
            .iter()
            .map(|x| (x * Rat::from_integer(den.clone())).to_integer().to_i64().expect("shift too large"))
            .collect();
        let scale = (lattice.qden() as f64) * (shift_den as f64) * (shift_den as f64);
        let a_len = (a_range.1 - a_range.0 + 1).max(0) as usize;
        let c_len = (c_range.1 - c_range.0 + 1).max(0) as usize;
        let mut table = vec![-1i128; a_len * c_len];
        for ci in 0..c_len {
            for ai in 0..a_len {
                if let Some(r) = radius(a_range.0 + ai as i64, c_range.0 + ci as i64) {
                    let v = (r.max(0.0) * r.max(0.0) * scale) * (1.0 + 1e-9) + 2.0;
                    table[ci * a_len + ai] = if v >= 1e36 { i128::MAX } else { v.floor() as i128 };
                }
            }
        }
        NormBound { shift_num, shift_den, a0: a_range.0, c0: c_range.0, a_len, c_len, table }
    }

    pub fn contains(&self, lattice: &LatticeL0, t: &Index) -> bool {
        let ai = t.a - self.a0;
        let ci = t.c - self.c0;
        if ai < 0 || ci < 0 || ai as usize >= self.a_len || ci as usize >= self.c_len {
            return false;
        }
        let lim = self.table[ci as usize * self.a_len + ai as usize];
        if lim < 0 {
            return false;
        }
        let v: smallvec::SmallVec<[i64; 4]> =
            t.b.iter().zip(&self.shift_num).map(|(x, s)| x * self.shift_den + s).collect();
        lattice.qnum(&v) <= lim
    }
}

impl TruncationFilter {
    pub fn all() -> Self {
        Self::default()
    }

    /// `a < a_max` and `c < c_max`.
    pub fn box_below(a_max: Rat, c_max: Rat) -> Self {
        TruncationFilter { a_max: Some(a_max), c_max: Some(c_max), ..Default::default() }
    }

    pub fn with_a_max(mut self, v: Rat) -> Self {
        self.a_max = Some(tighter(self.a_max, v, true));
        self
    }

    pub fn with_c_max(mut self, v: Rat) -> Self {
        self.c_max = Some(tighter(self.c_max, v, true));
        self
    }

    pub fn with_a_min(mut self, v: Rat) -> Self {
        self.a_min = Some(tighter(self.a_min, v, false));
        self
    }

    pub fn with_c_min(mut self, v: Rat) -> Self {
        self.c_min = Some(tighter(self.c_min, v, false));
        self
    }

    pub fn with_region(mut self, r: Region) -> Self {
        self.region = Some(r);
        self
    }

    pub fn with_wj_max(mut self, w: Vec<Rat>) -> Self {
        self.wj_max = Some(merge_vec(self.wj_max, w, true));
        self
    }

    pub fn with_wj_min(mut self, w: Vec<Rat>) -> Self {
        self.wj_min = Some(merge_vec(self.wj_min, w, false));
        self
    }

    pub fn with_constraint(mut self, c: Constraint) -> Self {
        self.constraints.push(Arc::new(c));
        self
    }

    pub fn intersect(&self, other: &TruncationFilter) -> TruncationFilter {
        let mut f = self.clone();
        if let Some(v) = &other.a_max {
            f = f.with_a_max(v.clone());
        }
        if let Some(v) = &other.c_max {
            f = f.with_c_max(v.clone());
        }
        if let Some(v) = &other.a_min {
            f = f.with_a_min(v.clone());
        }
        if let Some(v) = &other.c_min {
            f = f.with_c_min(v.clone());
        }
        if let Some(v) = &other.wj_max {
            f = f.with_wj_max(v.clone());
        }
        if let Some(v) = &other.wj_min {
            f = f.with_wj_min(v.clone());
        }
        if let Some(r) = other.region {
            f.region = match f.region {
                None => Some(r),
                Some(s) if s == r => Some(r),
                // disjoint regions: nothing passes
                Some(_) => Some(Region::NotPositive),
            };
        }
        f.constraints.extend(other.constraints.iter().cloned());
        f
    }

    pub fn compile(&self, lattice: &LatticeL0) -> CompiledFilter {
        let lam = |w: &Option<Vec<Rat>>, upper: bool| -> Vec<Option<i64>> {
            (0..lattice.rank())
                .map(|j| {
                    w.as_ref().and_then(|w| w.get(j)).map(|v| {
                        let s = v * rat::int(lattice.chamber()[j].den);
                        if upper {
                            rat::floor_i64(&s)
                        } else {
                            rat::ceil_i64(&s)
                        }
                    })
                })
                .collect()
        };
        let mut a_hi = self.a_max.as_ref().map(rat::below).unwrap_or(i64::MAX);
        let mut c_hi = self.c_max.as_ref().map(rat::below).unwrap_or(i64::MAX);
        let mut profiles = Vec::new();
        let mut norms = Vec::new();
        for c in &self.constraints {
            match c.as_ref() {
                Constraint::Profile { c0, a_hi: tab } => {
                    c_hi = c_hi.min(c0 + tab.len() as i64 - 1);
                    if let Some(m) = tab.iter().max() {
                        a_hi = a_hi.min(*m);
                    }
                    profiles.push(c.clone());
                }
                Constraint::Norm(_) => norms.push(c.clone()),
            }
        }
        CompiledFilter {
            a_hi,
            c_hi,
            a_lo: self.a_min.as_ref().map(rat::ceil_i64).unwrap_or(i64::MIN),
            c_lo: self.c_min.as_ref().map(rat::ceil_i64).unwrap_or(i64::MIN),
            lam_hi: lam(&self.wj_max, true),
            lam_lo: lam(&self.wj_min, false),
            region: self.region,
            profiles,
            norms,
        }
    }

    pub fn contains(&self, lattice: &LatticeL0, t: &Index) -> bool {
        self.compile(lattice).contains(lattice, t)
    }
}

fn tighter(old: Option<Rat>, new: Rat, upper: bool) -> Rat {
    match old {
        None => new,
        Some(o) => {
            if (upper && new < o) || (!upper && new > o) {
                new
            } else {
                o
            }
        }
    }
}

fn merge_vec(old: Option<Vec<Rat>>, new: Vec<Rat>, upper: bool) -> Vec<Rat> {
    match old {
        None => new,
        Some(o) => o.into_iter().zip(new).map(|(x, y)| tighter(Some(x), y, upper)).collect(),
    }
}

/// Integer form of a [`TruncationFilter`] for a fixed lattice.
#[derive(Clone, Debug)]
pub struct CompiledFilter {
    /// Inclusive bounds.
    pub a_hi: i64,
    pub c_hi: i64,
    pub a_lo: i64,
    pub c_lo: i64,
    /// Bounds on the numerators of the chamber functionals.
    pub lam_hi: Vec<Option<i64>>,
    pub lam_lo: Vec<Option<i64>>,
    pub region: Option<Region>,
    profiles: Vec<Arc<Constraint>>,
    norms: Vec<Arc<Constraint>>,
}

impl CompiledFilter {
    /// Largest admissible `a` for indices with the given `c`.
    pub fn a_hi_at(&self, c: i64) -> i64 {
        let mut hi = self.a_hi;
        for p in &self.profiles {
            if let Constraint::Profile { c0, a_hi } = p.as_ref() {
                let i = c - c0;
                if i < 0 || i as usize >= a_hi.len() {
                    return i64::MIN;
                }
                hi = hi.min(a_hi[i as usize]);
            }
        }
        hi
    }

    pub fn contains(&self, lattice: &LatticeL0, t: &Index) -> bool {
        if t.c > self.c_hi || t.c < self.c_lo || t.a < self.a_lo || t.a > self.a_hi_at(t.c) {
            return false;
        }
        for (j, f) in lattice.chamber().iter().enumerate() {
            let (hi, lo) = (self.lam_hi[j], self.lam_lo[j]);
            if hi.is_none() && lo.is_none() {
                continue;
            }
            let v = f.eval_num(&t.b);
            if hi.is_some_and(|h| v > h) || lo.is_some_and(|l| v < l) {
                return false;
            }
        }
        if let Some(r) = self.region {
            if lattice.classify(t) != r {
                return false;
            }
        }
        self.norms.iter().all(|n| match n.as_ref() {
            Constraint::Norm(nb) => nb.contains(lattice, t),
            _ => true,
        })
    }

    /// Whether any bound limits multiples `k t` for growing `k`; returns the
    /// largest `k` that can pass the upper bounds.
    pub fn multiple_cap(&self, lattice: &LatticeL0, t: &Index) -> Option<i64> {
        let mut cap: Option<i64> = None;
        let mut take = |v: i64| cap = Some(cap.map_or(v, |c: i64| c.min(v)));
        if t.a > 0 && self.a_hi != i64::MAX {
            take(self.a_hi.max(-1).div_euclid(t.a));
        }
        if t.c > 0 && self.c_hi != i64::MAX {
            take(self.c_hi.max(-1).div_euclid(t.c));
        }
        if t.a < 0 && self.a_lo != i64::MIN {
            take(self.a_lo.min(1).div_euclid(t.a));
        }
        for (j, f) in lattice.chamber().iter().enumerate() {
            let v = f.eval_num(&t.b);
            if v > 0 {
                if let Some(h) = self.lam_hi[j] {
                    take(h.max(-1).div_euclid(v));
                }
            } else if v < 0 {
                if let Some(l) = self.lam_lo[j] {
                    take(l.min(1).div_euclid(v));
                }
            }
        }
        cap.map(|c| c.max(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_membership() {
        let l = LatticeL0::hermitian_d3();
        let f = TruncationFilter::box_below(rat::int(3), rat::frac(5, 2)).compile(&l);
        assert!(f.contains(&l, &Index::new(2, &[0, 0], 2)));
        assert!(!f.contains(&l, &Index::new(3, &[0, 0], 2)));
        assert!(!f.contains(&l, &Index::new(2, &[0, 0], 3)));
    }

    #[test]
    fn functional_bounds_and_caps() {
        let l = LatticeL0::hermitian_d3();
        let f = TruncationFilter::all().with_wj_max(vec![rat::int(2), rat::int(100)]).compile(&l);
        assert!(f.contains(&l, &Index::new(0, &[0, -2], 0)));
        assert!(!f.contains(&l, &Index::new(0, &[0, -3], 0)));
        assert_eq!(f.multiple_cap(&l, &Index::new(0, &[0, -1], 0)), Some(2));
        assert_eq!(f.multiple_cap(&l, &Index::new(1, &[0, 0], 0)), None);
    }

    #[test]
    fn intersection_is_conjunction() {
        let l = LatticeL0::hermitian_d3();
        let f = TruncationFilter::box_below(rat::int(4), rat::int(9));
        let g = TruncationFilter::box_below(rat::int(9), rat::int(2)).with_region(Region::A);
        let h = f.intersect(&g);
        for a in -1..6 {
            for c in -1..6 {
                for b in [[0, 0], [1, 0], [3, 2]] {
                    let t = Index::new(a, &b, c);
                    assert_eq!(h.contains(&l, &t), f.contains(&l, &t) && g.contains(&l, &t));
                }
            }
        }
    }

    #[test]
    fn profile_and_norm() {
        let l = LatticeL0::hermitian_d3();
        let nb = NormBound::new(&l, &[rat::int(0), rat::int(0)], (0, 3), (0, 3), |a, c| Some(((a * c) as f64).sqrt()));
        let f = TruncationFilter::all()
            .with_constraint(Constraint::Profile { c0: 0, a_hi: vec![3, 2, 1] })
            .with_constraint(Constraint::Norm(nb))
            .compile(&l);
        assert!(f.contains(&l, &Index::new(1, &[0, 0], 2)));
        assert!(!f.contains(&l, &Index::new(2, &[0, 0], 2)));
        assert!(!f.contains(&l, &Index::new(0, &[0, 0], 3)));
        assert!(f.contains(&l, &Index::new(1, &[3, 2], 1)));
        assert!(!f.contains(&l, &Index::new(1, &[6, 4], 1)));
    }
}
