use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::lattice::Index;
use crate::rat::{self, Rat};
use crate::series::Shift;
use crate::vvmf::VVForm;

/// The Weyl vector `[a_W, b_W, c_W]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylData {
    pub a: Rat,
    pub b: Vec<Rat>,
    pub c: Rat,
}

impl WeylData {
    pub fn from_parts(a: Rat, b: Vec<Rat>, c: Rat) -> Self {
        WeylData { a, b, c }
    }

    pub fn shift(&self) -> Shift {
        Shift { a: self.a.clone(), b: self.b.clone(), c: self.c.clone() }
    }

    pub fn is_integral(&self) -> bool {
        self.shift().is_integral()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": rat::format(&self.a),
            "b": self.b.iter().map(rat::format).collect::<Vec<_>>(),
            "c": rat::format(&self.c),
        })
    }
}

fn sigma1(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

/// Weyl vector of the product attached to `f`.
pub fn weyl_data(f: &VVForm) -> Result<WeylData> {
    let lat = f.lattice();
    let r = lat.rank();
    let mut a = Rat::zero();
    let mut b = vec![Rat::zero(); r];
    let mut sigma_sum = Rat::zero();
    let depth = -f.d_min().clone();
    if depth > Rat::zero() {
        for v in lat.short_dual_vectors(&depth) {
            let q = lat.quadratic_value(&v)?;
            if q >= depth {
                continue;
            }
            let c0 = Rat::from_integer(f.lookup(&v, &-q.clone())?);
            a += &c0;
            if lat.positive_functional(&v).is_some() {
                for (x, y) in b.iter_mut().zip(v.iter()) {
                    *x -= &c0 * rat::int(*y) / rat::int(2);
                }
            }
            let mut n = 1i64;
            while rat::int(n) + &q < depth {
                let cn = f.lookup(&v, &(-rat::int(n) - &q))?;
                sigma_sum += Rat::from_integer(cn * BigInt::from(sigma1(n)));
                n += 1;
            }
        }
    }
    a /= rat::int(24);
    let c = &a - sigma_sum;
    Ok(WeylData { a, b, c })
}

/// The index `[a_W, b_W, c_W]` when it is integral.
pub fn weyl_index(w: &WeylData) -> Option<Index> {
    w.shift().apply(&Index::zero(w.b.len())).to_index()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vvmf::parse_vvform;

    #[test]
    fn constant_term_only() {
        let f = parse_vvform(&serde_json::json!({
            "D": -3, "weight": 0, "precision": 0,
            "components": [{"key": [0, 0], "terms": [{"exp": 0, "coeff": 24}]}]
        }))
        .unwrap();
        let w = weyl_data(&f).unwrap();
        assert_eq!(w, WeylData::from_parts(rat::int(1), vec![Rat::zero(), Rat::zero()], rat::int(1)));
        assert_eq!(weyl_index(&w), Some(Index::new(1, &[0, 0], 1)));
    }

    #[test]
    fn zero_form() {
        let f = parse_vvform(&serde_json::json!({"D": -3, "weight": 0, "components": []})).unwrap();
        let w = weyl_data(&f).unwrap();
        assert!(w.a.is_zero() && w.c.is_zero() && w.b.iter().all(|x| x.is_zero()));
    }
}
