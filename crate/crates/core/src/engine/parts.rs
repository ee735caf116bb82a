use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::filter::{CompiledFilter, TruncationFilter};
use crate::lattice::{Coords, Index, LatticeL0, Region};
use crate::rat;
use crate::series::{FormalSeries, TermMap};
use crate::vvmf::VVForm;

/// Construction filters for the five parts of the logarithm.
#[derive(Clone, Debug, Default)]
pub struct PartBounds {
    pub a: TruncationFilter,
    pub b: TruncationFilter,
    pub c: TruncationFilter,
    pub d: TruncationFilter,
    pub e: Vec<TruncationFilter>,
}

#[derive(Clone, Debug)]
pub struct PartsBundle {
    pub a: FormalSeries,
    pub b: FormalSeries,
    pub c: FormalSeries,
    pub d: FormalSeries,
    pub e: Vec<FormalSeries>,
}

pub fn build_parts(f: &VVForm, bounds: &PartBounds) -> Result<PartsBundle> {
    let rank = f.lattice().rank();
    if bounds.e.len() != rank {
        return Err(Error::Contract(format!("expected {rank} filters for the E parts, got {}", bounds.e.len())));
    }
    Ok(PartsBundle {
        a: build_part(f, Region::A, &bounds.a)?,
        b: build_part(f, Region::B, &bounds.b)?,
        c: build_part(f, Region::C, &bounds.c)?,
        d: build_part(f, Region::D, &bounds.d)?,
        e: (0..rank).map(|j| build_part(f, Region::E(j), &bounds.e[j])).collect::<Result<_>>()?,
    })
}

/// A positive index together with its exponent `f(b, disc)` in the product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub index: Index,
    pub exponent: BigInt,
}

/// `sum -f(b, disc(t)) sum_m e^{m t} / m` over the region, restricted to `filter`.
pub fn build_part(f: &VVForm, region: Region, filter: &TruncationFilter) -> Result<FormalSeries> {
    let lat = f.lattice().clone();
    let cf = filter.compile(&lat);
    let mut base = Vec::new();
    for t in region_factors(f, region, &cf)? {
        let cap = cf
            .multiple_cap(&lat, &t.index)
            .ok_or_else(|| Error::Contract(format!("filter does not bound the multiples of {}", t.index)))?;
        for m in 1..=cap {
            let mt = t.index.scale(m);
            if cf.contains(&lat, &mt) {
                base.push((mt, m, t.exponent.clone()));
            }
        }
    }
    let den = base.iter().fold(BigInt::from(1), |acc, (_, m, _)| acc.lcm(&BigInt::from(*m)));
    let mut terms = TermMap::default();
    for (t, m, e) in base {
        let v = -e * (&den / BigInt::from(m));
        *terms.entry(t).or_insert_with(BigInt::zero) += v;
    }
    Ok(FormalSeries::from_parts(lat, den, terms, filter.clone()))
}

/// Indices `t` of the region inside the upper bounds of `cf` with nonzero
/// exponent `f(b, disc(t))`; the full filter is not applied.
pub fn region_factors(f: &VVForm, region: Region, cf: &CompiledFilter) -> Result<Vec<Factor>> {
    let lat = f.lattice();
    let qden = lat.qden() as i128;
    let unit = (f.scale() / lat.qden()) as i128;
    // largest k with k < -d_min * qden
    let depth = rat::ceil_i64(&(-f.d_min() * rat::int(lat.qden()))) as i128 - 1;
    let need = |what: &str, v: i64, sentinel: i64| -> Result<i64> {
        if v == sentinel {
            Err(Error::Contract(format!("{what} bound required to build part {region:?}")))
        } else {
            Ok(v)
        }
    };
    let mut out = Vec::new();
    let mut push = |t: Index, disc_num: i128, pos: usize| -> Result<()> {
        let n = (disc_num * unit).to_i64().ok_or_else(|| Error::Input("exponent out of range".into()))?;
        if let Some(v) = f.lookup_scaled(pos, n)? {
            out.push(Factor { index: t, exponent: v.clone() });
        }
        Ok(())
    };
    match region {
        Region::A | Region::B => {
            let a_hi = need("a", cf.a_hi, i64::MAX)?;
            let c_hi = need("c", cf.c_hi, i64::MAX)?;
            if a_hi < 1 || c_hi < 1 {
                return Ok(out);
            }
            let extra = if region == Region::B { depth.max(-1) } else { -1 };
            let top = a_hi as i128 * c_hi as i128 * qden + extra;
            let vs = SortedVectors::new(lat, top);
            for c in 1..=c_hi {
                for a in 1..=a_hi {
                    let ac = a as i128 * c as i128 * qden;
                    let (lo, hi) = if region == Region::A { (0, ac - 1) } else { (ac, ac + depth) };
                    for (b, qn, pos) in vs.range(lo, hi) {
                        push(Index { a, c, b: b.clone() }, ac - qn, pos)?;
                    }
                }
            }
        }
        Region::C => {
            let c_hi = need("c", cf.c_hi, i64::MAX)?;
            if depth < 0 || c_hi < 1 {
                return Ok(out);
            }
            let vs = SortedVectors::new(lat, depth);
            for c in 1..=c_hi {
                let a_lo = -(depth.div_euclid(c as i128 * qden)) as i64;
                for a in a_lo..=0.min(cf.a_hi) {
                    let ac = a as i128 * c as i128 * qden;
                    for (b, qn, pos) in vs.range(i128::MIN, ac + depth) {
                        push(Index { a, c, b: b.clone() }, ac - qn, pos)?;
                    }
                }
            }
        }
        Region::D => {
            let a_hi = need("a", cf.a_hi, i64::MAX)?;
            if depth < 0 {
                return Ok(out);
            }
            let vs = SortedVectors::new(lat, depth);
            for a in 1..=a_hi {
                for (b, qn, pos) in vs.range(i128::MIN, depth) {
                    push(Index { a, c: 0, b: b.clone() }, -qn, pos)?;
                }
            }
        }
        Region::E(j) => {
            if depth < 0 {
                return Ok(out);
            }
            let vs = SortedVectors::new(lat, depth);
            for (b, qn, pos) in vs.range(i128::MIN, depth) {
                if lat.positive_functional(b) == Some(j) {
                    push(Index { a: 0, c: 0, b: b.clone() }, -qn, pos)?;
                }
            }
        }
        Region::NotPositive => {}
    }
    Ok(out)
}

/// Dual vectors sorted by norm, with their discriminant positions.
struct SortedVectors {
    items: Vec<(Coords, i128, usize)>,
}

impl SortedVectors {
    fn new(lat: &LatticeL0, top: i128) -> Self {
        let mut items: Vec<(Coords, i128, usize)> = lat
            .vectors_up_to(top)
            .into_iter()
            .map(|b| {
                let (q, pos) = (lat.qnum(&b), lat.disc_position(&b));
                (b, q, pos)
            })
            .collect();
        items.sort_by(|x, y| (x.1, &x.0).cmp(&(y.1, &y.0)));
        SortedVectors { items }
    }

    /// Vectors with `lo <= qnum <= hi`.
    fn range(&self, lo: i128, hi: i128) -> impl Iterator<Item = (&Coords, i128, usize)> {
        let start = self.items.partition_point(|x| x.1 < lo);
        let end = self.items.partition_point(|x| x.1 <= hi);
        self.items[start..end.max(start)].iter().map(|(b, q, p)| (b, *q, *p))
    }
}
