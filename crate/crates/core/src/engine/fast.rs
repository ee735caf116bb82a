//! The logarithm/exponential pipeline.

use num_traits::Zero;

use crate::engine::parts::{build_part, region_factors};
use crate::engine::result::{Algorithm, ProductResult, Window};
use crate::engine::{weyl_data, WeylData};
use crate::error::{Error, Result};
use crate::filter::{Constraint, NormBound, TruncationFilter};
use crate::lattice::{LatticeL0, Region};
use crate::par::Execution;
use crate::rat::{self, Rat};
use crate::vvmf::{required_precision, VVForm};

#[derive(Clone, Copy, Debug, Default)]
pub struct ProductOptions {
    pub exec: Execution,
    /// Added to every internal truncation bound and exponent cap.  The
    /// output does not depend on it.
    pub cap_slack: i64,
}

pub fn compute_product(f: &VVForm, big_b: i64) -> Result<ProductResult> {
    compute_product_with(f, big_b, &ProductOptions::default())
}

pub fn compute_product_with(f: &VVForm, big_b: i64, opts: &ProductOptions) -> Result<ProductResult> {
    if big_b < 1 {
        return Err(Error::Input(format!("B must be positive, got {big_b}")));
    }
    let lat = f.lattice().clone();
    let rank = lat.rank();
    let w = weyl_data(f)?;
    let win = Window::new(&w, big_b);
    let mut res = ProductResult::empty(lat.clone(), big_b, w.clone(), Algorithm::Log);
    if win.is_empty() {
        return Ok(res);
    }
    let exec = opts.exec;
    let s = opts.cap_slack.max(0);
    let ac = win.a_hi + s;
    let cc = win.c_hi + s;
    let q_out = win.q_out(s);
    let depth = depth_sqrt(f);

    // C first: its powers give the smallest reachable a for each budget of c
    let cf = upper_box(None, Some(cc));
    let exp_c = build_part(f, Region::C, &cf)?.exp_partial(cc as u64, &cf, exec)?;
    let mut phi = vec![0i64; cc as usize + 1];
    for t in exp_c.indices() {
        let i = t.c as usize;
        phi[i] = phi[i].min(t.a);
    }
    for i in 1..phi.len() {
        phi[i] = phi[i].min(phi[i - 1]);
    }
    let a_floor = phi[cc as usize];

    let (a_neg, _) = required_precision(big_b, &w, f.d_min());
    let profile: Vec<i64> = (0..=cc).map(|c| ac - phi[(cc - c) as usize]).collect();
    let bf = upper_box(None, Some(cc))
        .with_a_max(rat::int(big_b + s) - &w.a + &a_neg)
        .with_constraint(Constraint::Profile { c0: 0, a_hi: profile });
    let exp_b = build_part(f, Region::B, &bf)?.exp_partial(cc as u64, &bf, exec)?;

    let e_empty = (0..rank).all(|j| {
        region_factors(f, Region::E(j), &TruncationFilter::all().compile(&lat)).map(|v| v.is_empty()).unwrap_or(false)
    });
    let norm_filter = |a_lo: i64, d_weight: f64| -> TruncationFilter {
        let mut flt = upper_box(Some(ac), Some(cc));
        if e_empty {
            flt = flt.with_constraint(norm_bound(&lat, &w, &q_out, (a_lo, ac), cc, d_weight));
        }
        flt
    };

    let x = exp_b.multiply(&exp_c, &norm_filter(a_floor, depth), exec);
    drop(exp_b);
    drop(exp_c);
    if x.is_empty() {
        return Ok(res);
    }

    let a_min = x.support_stats()?.a_min;
    let d_cap = ac - rat::floor_i64(&a_min);
    let df = upper_box(Some(d_cap), None);
    let part_d = build_part(f, Region::D, &df)?;
    let mut y = if part_d.is_empty() {
        x
    } else {
        let exp_d = part_d.exp_partial(d_cap.max(0) as u64, &df, exec)?;
        x.multiply(&exp_d, &norm_filter(a_floor, 0.0), exec)
    };

    let mut lam_hi: Vec<Option<Rat>> = vec![None; rank];
    let mut lam_lo: Vec<Option<Rat>> = vec![None; rank];
    for j in 0..rank {
        if y.is_empty() {
            return Ok(res);
        }
        let st = y.support_stats()?;
        let w_out = output_lambda_bound(&lat, &w, j, &q_out);
        let q_a = rat::int((ac - rat::floor_i64(&st.a_min)) * (cc - rat::floor_i64(&st.c_min)));
        let w_a = lat.w_j_max(j, &(q_a + rat::int(1)));
        let lw = lambda_rat(&lat, j, &w.b);
        let hi = &w_out - &lw + &w_a + rat::int(s);
        let lo = -&w_out - &lw - &w_a - rat::int(s);
        let b_tru = &hi - &st.wj_min[j];
        lam_hi[j] = Some(hi);
        lam_lo[j] = Some(lo);
        let ef = lambda_filter(TruncationFilter::all(), &single(rank, j, b_tru.clone()), &vec![None; rank]);
        let part_e = build_part(f, Region::E(j), &ef)?;
        let yf = lambda_filter(upper_box(Some(ac), Some(cc)), &lam_hi, &lam_lo);
        y = if part_e.is_empty() {
            y.truncate(&yf)
        } else {
            let eta = rat::floor_i64(&(&b_tru / lat.epsilon(j))).max(0);
            let exp_e = part_e.exp_partial(eta as u64, &ef, exec)?;
            y.multiply(&exp_e, &yf, exec)
        };
    }
    if y.is_empty() {
        return Ok(res);
    }

    let st = y.support_stats()?;
    let (y_a_min, y_c_min) = (rat::floor_i64(&st.a_min), rat::floor_i64(&st.c_min));
    let a_cap = ac - y_a_min;
    let c_cap = cc - y_c_min;
    if a_cap >= 1 && c_cap >= 1 {
        // largest exponent queried while building A
        f.ensure_precision(&rat::int(a_cap * c_cap))?;
    }
    let part_a = build_part(f, Region::A, &upper_box(Some(a_cap), Some(c_cap)))?;

    let level = |k: i64| -> TruncationFilter {
        upper_box(Some(ac - k), Some(cc - k)).with_constraint(norm_bound(&lat, &w, &q_out, (y_a_min, ac), cc, 0.0))
    };
    let top = cc.min(a_cap).max(0);
    let mut fact = Rat::from_integer(factorial(top));
    let mut h = y.truncate(&level(top)).scale(&(Rat::from_integer(1.into()) / &fact));
    for k in (0..top).rev() {
        fact /= rat::int(k + 1);
        let lf = level(k);
        let xi = y.truncate(&lf).scale(&(Rat::from_integer(1.into()) / &fact));
        h = if part_a.is_empty() || h.is_empty() { xi } else { xi.add(&part_a.multiply(&h, &lf, exec)) };
    }

    let shift = w.shift();
    for (t, v) in h.sorted() {
        let key = shift.apply(&t);
        if !win.contains(&lat, &key) {
            continue;
        }
        if !v.is_integer() {
            return Err(Error::Integrality { index: format!("{t}"), value: rat::format(&v) });
        }
        res.coefficients.insert(key, v.to_integer());
    }
    Ok(res)
}

fn factorial(n: i64) -> num_bigint::BigInt {
    (1..=n).fold(num_bigint::BigInt::from(1), |acc, k| acc * k)
}

/// `sqrt(-d_min)`, the largest norm of a vector in a D part index.
pub(crate) fn depth_sqrt(f: &VVForm) -> f64 {
    let d = -rat::to_f64(f.d_min());
    if d > 0.0 {
        d.sqrt()
    } else {
        0.0
    }
}

/// Filter `a <= a_hi`, `c <= c_hi` (inclusive).
pub(crate) fn upper_box(a_hi: Option<i64>, c_hi: Option<i64>) -> TruncationFilter {
    let mut f = TruncationFilter::all();
    if let Some(a) = a_hi {
        f = f.with_a_max(rat::int(a) + rat::int(1));
    }
    if let Some(c) = c_hi {
        f = f.with_c_max(rat::int(c) + rat::int(1));
    }
    f
}

/// Bound on the norm of `b + b_W` for an intermediate index `[a, b, c]`.
///
/// The remaining factors have non-negative `a` and `c`; the positive
/// definite ones add at most `sqrt((ac - a)(cc - c))` to the norm and each
/// remaining `D`-type factor at most `d_weight`.
pub(crate) fn norm_bound(
    lat: &LatticeL0,
    w: &WeylData,
    q_out: &Rat,
    a_range: (i64, i64),
    cc: i64,
    d_weight: f64,
) -> Constraint {
    let r_out = rat::to_f64(q_out).max(0.0).sqrt();
    let ac = a_range.1;
    Constraint::Norm(NormBound::new(lat, &w.b, a_range, (0, cc), |a, c| {
        let (da, dc) = (ac - a, cc - c);
        if da < 0 || dc < 0 {
            return None;
        }
        Some(r_out + ((da * dc) as f64).sqrt() + da as f64 * d_weight)
    }))
}

/// Bound on `|lambda_j(b)|` for shifted output indices, where `q(b) <= q_out`.
pub(crate) fn output_lambda_bound(lat: &LatticeL0, w: &WeylData, j: usize, q_out: &Rat) -> Rat {
    if w.b.iter().all(|x| x.is_integer()) {
        lat.w_j_max(j, &(q_out + rat::int(1)))
    } else {
        lat.real_lambda_bound(j, q_out)
    }
}

pub(crate) fn lambda_rat(lat: &LatticeL0, j: usize, b: &[Rat]) -> Rat {
    lat.chamber()[j].coeffs().iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

fn single(rank: usize, j: usize, v: Rat) -> Vec<Option<Rat>> {
    let mut out = vec![None; rank];
    out[j] = Some(v);
    out
}

/// Adds per-functional bounds; `None` leaves a functional unbounded.
pub(crate) fn lambda_filter(f: TruncationFilter, hi: &[Option<Rat>], lo: &[Option<Rat>]) -> TruncationFilter {
    let big = rat::int(1i64 << 40);
    let mut f = f;
    if hi.iter().any(|x| x.is_some()) {
        f = f.with_wj_max(hi.iter().map(|x| x.clone().unwrap_or_else(|| big.clone())).collect());
    }
    if lo.iter().any(|x| x.is_some()) {
        f = f.with_wj_min(lo.iter().map(|x| x.clone().unwrap_or_else(|| -big.clone())).collect());
    }
    f
}
