//! Truncated product over all factors `(1 - e^t)^{f(t)}`.

use std::time::Instant;

use num_traits::Zero;

use crate::engine::fast::{depth_sqrt, lambda_filter, lambda_rat, norm_bound, output_lambda_bound, upper_box};
use crate::engine::parts::{region_factors, Factor};
use crate::engine::result::{Algorithm, ProductResult, Window};
use crate::engine::weyl_data;
use crate::error::{Error, Result};
use crate::filter::{Constraint, TruncationFilter};
use crate::lattice::Region;
use crate::par::Execution;
use crate::rat::{self, Rat};
use crate::series::FormalSeries;
use crate::vvmf::{required_precision, VVForm};

#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveOptions {
    pub exec: Execution,
    /// Give up with [`Error::Timeout`] once this instant has passed.
    pub deadline: Option<Instant>,
}

pub fn naive_product(f: &VVForm, big_b: i64) -> Result<ProductResult> {
    naive_product_with(f, big_b, &NaiveOptions::default())
}

pub fn naive_product_with(f: &VVForm, big_b: i64, opts: &NaiveOptions) -> Result<ProductResult> {
    if big_b < 1 {
        return Err(Error::Input(format!("B must be positive, got {big_b}")));
    }
    let lat = f.lattice().clone();
    let rank = lat.rank();
    let w = weyl_data(f)?;
    let win = Window::new(&w, big_b);
    let mut res = ProductResult::empty(lat.clone(), big_b, w.clone(), Algorithm::Naive);
    if win.is_empty() {
        return Ok(res);
    }
    let exec = opts.exec;
    let (ac, cc) = (win.a_hi, win.c_hi);
    let q_out = win.q_out(0);

    // each index of the C region has a >= m_c * c
    let m_c = (rat::floor_i64(f.d_min()) + 1).min(0);
    let a_lo = m_c * cc;
    let (a_neg, _) = required_precision(big_b, &w, f.d_min());
    let ab_hi = rat::below(&(rat::int(big_b) - &w.a + &a_neg)).max(ac - a_lo);
    let factors = |region: Region, flt: TruncationFilter| -> Result<Vec<Factor>> {
        let mut v = region_factors(f, region, &flt.compile(&lat))?;
        v.sort_by(|x, y| x.index.cmp(&y.index));
        Ok(v)
    };
    let c_factors = factors(Region::C, upper_box(None, Some(cc)))?;
    let d_factors = factors(Region::D, upper_box(Some(ac - a_lo), None))?;
    let b_factors = factors(Region::B, upper_box(Some(ab_hi), Some(cc)))?;
    let a_factors = factors(Region::A, upper_box(Some(ab_hi), Some(cc)))?;
    let e_factors: Vec<Vec<Factor>> =
        (0..rank).map(|j| factors(Region::E(j), TruncationFilter::all())).collect::<Result<_>>()?;
    let e_empty = e_factors.iter().all(|v| v.is_empty());

    let check_time = || -> Result<()> {
        match opts.deadline {
            Some(d) if Instant::now() > d => Err(Error::Timeout("naive product exceeded its time budget".into())),
            _ => Ok(()),
        }
    };
    let mut p = FormalSeries::unit(lat.clone());
    let mul = |p: FormalSeries, t: &Factor, gf: &TruncationFilter, out: &TruncationFilter| -> Result<FormalSeries> {
        check_time()?;
        let g = FormalSeries::geometric_power(lat.clone(), &t.index, &t.exponent, gf)?;
        Ok(p.multiply(&g, out, exec))
    };

    let c_phase = upper_box(None, Some(cc))
        .with_constraint(Constraint::Profile { c0: 0, a_hi: (0..=cc).map(|c| ac - m_c * (cc - c)).collect() });
    let c_gen = upper_box(None, Some(cc));
    for t in &c_factors {
        p = mul(p, t, &c_gen, &c_phase)?;
    }
    let mut pos_phase = upper_box(Some(ac), Some(cc));
    if e_empty {
        pos_phase = pos_phase.with_constraint(norm_bound(&lat, &w, &q_out, (a_lo, ac), cc, depth_sqrt(f)));
    }
    let pos_gen = upper_box(Some(ac - a_lo), Some(cc));
    for t in d_factors.iter().chain(&b_factors).chain(&a_factors) {
        p = mul(p, t, &pos_gen, &pos_phase)?;
    }

    let mut lam_hi: Vec<Option<Rat>> = vec![None; rank];
    let mut lam_lo: Vec<Option<Rat>> = vec![None; rank];
    for (j, list) in e_factors.iter().enumerate() {
        if p.is_empty() {
            break;
        }
        let b_min = p.support_stats()?.wj_min[j].clone();
        let w_out = output_lambda_bound(&lat, &w, j, &q_out);
        let lw = lambda_rat(&lat, j, &w.b);
        lam_hi[j] = Some(&w_out - &lw);
        let mut gen_hi = vec![None; rank];
        gen_hi[j] = Some(&w_out - &lw - &b_min);
        let gen = lambda_filter(upper_box(Some(ac), Some(cc)), &gen_hi, &vec![None; rank]);
        let out = lambda_filter(upper_box(Some(ac), Some(cc)), &lam_hi, &lam_lo);
        for t in list {
            p = mul(p, t, &gen, &out)?;
        }
        lam_lo[j] = Some(-&w_out - &lw);
        p = p.truncate(&lambda_filter(upper_box(Some(ac), Some(cc)), &lam_hi, &lam_lo));
    }

    let shift = w.shift();
    for (t, v) in p.sorted() {
        let key = shift.apply(&t);
        if win.contains(&lat, &key) {
            debug_assert!(v.is_integer());
            if !v.is_zero() {
                res.coefficients.insert(key, v.to_integer());
            }
        }
    }
    Ok(res)
}
