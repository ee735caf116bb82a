use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::engine::WeylData;
use crate::lattice::LatticeL0;
use crate::rat::{self, Rat};
use crate::series::ShiftedIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Log,
    Naive,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Log => "log",
            Algorithm::Naive => "naive",
        })
    }
}

/// Truncated Fourier expansion of a Borcherds product.
///
/// Holds every nonzero coefficient at a positive semi-definite index
/// `[a, b, c]` with `0 <= a, c < B`, labelled after the Weyl shift.
#[derive(Clone, Debug)]
pub struct ProductResult {
    pub coefficients: BTreeMap<ShiftedIndex, BigInt>,
    pub precision: i64,
    pub weyl: WeylData,
    pub algorithm: Algorithm,
    lattice: Arc<LatticeL0>,
}

impl ProductResult {
    pub(crate) fn empty(lattice: Arc<LatticeL0>, precision: i64, weyl: WeylData, algorithm: Algorithm) -> Self {
        ProductResult { coefficients: BTreeMap::new(), precision, weyl, algorithm, lattice }
    }

    pub fn lattice(&self) -> &Arc<LatticeL0> {
        &self.lattice
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficient at an integral output index.
    pub fn coeff(&self, a: i64, b: &[i64], c: i64) -> BigInt {
        let key = ShiftedIndex { a: rat::int(a), c: rat::int(c), b: b.iter().map(|x| rat::int(*x)).collect() };
        self.coefficients.get(&key).cloned().unwrap_or_default()
    }

    /// Same coefficient maps, ignoring the algorithm tag.
    pub fn same_coefficients(&self, other: &ProductResult) -> bool {
        self.precision == other.precision && self.weyl == other.weyl && self.coefficients == other.coefficients
    }

    /// The part of the expansion with `a, c < b`.
    pub fn restrict(&self, b: i64) -> ProductResult {
        let lim = rat::int(b);
        let mut r = self.clone();
        r.precision = b.min(self.precision);
        r.coefficients.retain(|k, _| k.a < lim && k.c < lim);
        r
    }

    /// First index (in output order) whose coefficient differs.
    pub fn first_difference(&self, other: &ProductResult) -> Option<ShiftedIndex> {
        let keys: std::collections::BTreeSet<&ShiftedIndex> =
            self.coefficients.keys().chain(other.coefficients.keys()).collect();
        keys.into_iter().find(|k| self.coefficients.get(*k) != other.coefficients.get(*k)).cloned()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "B": self.precision,
            "algorithm": self.algorithm.to_string(),
            "weyl": self.weyl.to_json(),
            "coefficients": self.coefficients.iter().map(|(k, v)| {
                let (a, b, c) = k.to_json();
                serde_json::json!({"a": a, "b": b, "c": c, "coeff": v.to_string()})
            }).collect::<Vec<_>>(),
        })
    }

    pub fn to_csv(&self) -> String {
        let rank = self.lattice.rank();
        let mut out = String::from("a,");
        for i in 1..=rank {
            out.push_str(&format!("b{i},"));
        }
        out.push_str("c,coefficient\n");
        for (k, v) in &self.coefficients {
            out.push_str(&rat::format(&k.a));
            for x in &k.b {
                out.push(',');
                out.push_str(&rat::format(x));
            }
            out.push_str(&format!(",{},{}\n", rat::format(&k.c), v));
        }
        out
    }
}

/// The output window `0 <= a, c < B`, `q(b) <= a c` in shifted coordinates.
#[derive(Clone, Debug)]
pub(crate) struct Window {
    pub big_b: i64,
    /// Inclusive bounds on unshifted indices.
    pub a_hi: i64,
    pub c_hi: i64,
    pub a_lo: i64,
    pub c_lo: i64,
    weyl: WeylData,
}

impl Window {
    pub fn new(weyl: &WeylData, big_b: i64) -> Self {
        let b = rat::int(big_b);
        Window {
            big_b,
            a_hi: rat::below(&(&b - &weyl.a)),
            c_hi: rat::below(&(&b - &weyl.c)),
            a_lo: rat::ceil_i64(&-weyl.a.clone()),
            c_lo: rat::ceil_i64(&-weyl.c.clone()),
            weyl: weyl.clone(),
        }
    }

    /// Every factor has `c >= 0`, so so does every term of the product.
    pub fn is_empty(&self) -> bool {
        self.a_hi < self.a_lo || self.c_hi < self.c_lo.max(0)
    }

    /// `(a_hi + a_W)(c_hi + c_W)`, a bound for `q(b)` on shifted output indices.
    pub fn q_out(&self, slack: i64) -> Rat {
        let v = (rat::int(self.a_hi + slack) + &self.weyl.a) * (rat::int(self.c_hi + slack) + &self.weyl.c);
        if v.is_negative() {
            Rat::zero()
        } else {
            v
        }
    }

    pub fn contains(&self, lat: &LatticeL0, s: &ShiftedIndex) -> bool {
        let b = rat::int(self.big_b);
        if s.a.is_negative() || s.c.is_negative() || s.a >= b || s.c >= b {
            return false;
        }
        rational_q(lat, &s.b) <= &s.a * &s.c
    }
}

/// `q` on a vector with rational dual coordinates.
pub(crate) fn rational_q(lat: &LatticeL0, b: &[Rat]) -> Rat {
    let den = b.iter().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let scaled: Vec<i64> = b
        .iter()
        .map(|x| (x * Rat::from_integer(den.clone())).to_integer().to_i64().expect("coordinate out of range"))
        .collect();
    Rat::new(BigInt::from(lat.qnum(&scaled)), BigInt::from(lat.qden()) * &den * &den)
}
