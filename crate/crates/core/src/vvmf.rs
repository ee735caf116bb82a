//! Fourier data `f(lambda, m)` of the weakly holomorphic input form.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::engine::WeylData;
use crate::error::{Error, Result};
use crate::lattice::{DiscElement, LatticeL0};
use crate::rat::{self, Rat};

pub type Component = BTreeMap<Rat, BigInt>;

#[derive(Clone, Debug)]
pub struct VVForm {
    lattice: Arc<LatticeL0>,
    weight: Rat,
    d_min: Rat,
    d_min_declared: bool,
    precision_declared: bool,
    max_exponent: Option<Rat>,
    components: BTreeMap<DiscElement, Component>,
    scale: i64,
    fast: Vec<FxHashMap<i64, BigInt>>,
    d_min_scaled: i64,
    max_scaled: Option<i64>,
}

impl PartialEq for VVForm {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight
            && self.d_min == other.d_min
            && self.max_exponent == other.max_exponent
            && self.components == other.components
            && self.lattice.to_json() == other.lattice.to_json()
    }
}

impl VVForm {
    /// Validates and assembles a form.  `d_min` defaults to the smallest
    /// exponent minus one, `precision` to the largest exponent present.
    pub fn new(
        lattice: Arc<LatticeL0>,
        weight: Rat,
        components: BTreeMap<DiscElement, Component>,
        d_min: Option<Rat>,
        precision: Option<Rat>,
    ) -> Result<Self> {
        for (key, comp) in &components {
            if key.coords.len() != lattice.rank() || !lattice.is_reduced(&key.coords) {
                return Err(Error::NonReducedKey(key.coords.to_vec()));
            }
            let mut exps = comp.keys();
            if let Some(first) = exps.next() {
                if exps.any(|e| !(e - first).is_integer()) {
                    return Err(Error::MixedResidues(key.coords.to_vec()));
                }
            }
        }
        for (key, comp) in &components {
            let neg: Vec<i64> = key.coords.iter().map(|x| -x).collect();
            let nk = lattice.reduce_disc(&neg);
            if let Some(other) = components.get(&nk) {
                if other != comp {
                    return Err(Error::Asymmetric(key.coords.to_vec(), nk.coords.to_vec()));
                }
            }
        }
        let all_exps = || components.values().flat_map(|c| c.keys());
        let smallest = all_exps().min().cloned();
        let largest = all_exps().max().cloned();
        let d_min_declared = d_min.is_some();
        let d_min = match d_min {
            Some(d) => {
                if smallest.as_ref().is_some_and(|s| *s <= d) {
                    return Err(Error::Schema(format!("d_min {} is not below all exponents", rat::format(&d))));
                }
                d
            }
            None => smallest.map(|s| s - rat::int(1)).unwrap_or_else(Rat::zero),
        };
        let precision_declared = precision.is_some();
        let max_exponent = match precision {
            Some(p) => {
                if largest.as_ref().is_some_and(|l| *l > p) {
                    return Err(Error::Schema(format!("terms beyond the declared precision {}", rat::format(&p))));
                }
                Some(p)
            }
            None => largest,
        };
        let mut scale = lattice.qden();
        for e in all_exps().chain(std::iter::once(&d_min)).chain(max_exponent.iter()) {
            scale =
                scale.lcm(&e.denom().to_i64().ok_or_else(|| Error::Input("exponent denominator too large".into()))?);
        }
        let mut fast = vec![FxHashMap::default(); lattice.disc_reps().len()];
        for (key, comp) in &components {
            let pos = lattice.disc_position(&key.coords);
            for (e, v) in comp {
                fast[pos].insert(scaled(e, scale), v.clone());
            }
        }
        let d_min_scaled = scaled(&d_min, scale);
        let max_scaled = max_exponent.as_ref().map(|m| scaled(m, scale));
        Ok(VVForm {
            lattice,
            weight,
            d_min,
            d_min_declared,
            precision_declared,
            max_exponent,
            components,
            scale,
            fast,
            d_min_scaled,
            max_scaled,
        })
    }

    pub fn lattice(&self) -> &Arc<LatticeL0> {
        &self.lattice
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn d_min(&self) -> &Rat {
        &self.d_min
    }

    pub fn max_exponent(&self) -> Option<&Rat> {
        self.max_exponent.as_ref()
    }

    pub fn components(&self) -> &BTreeMap<DiscElement, Component> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|c| c.is_empty())
    }

    /// Exponent residue mod 1 of each nonempty component.
    pub fn residues(&self) -> Vec<(DiscElement, Rat)> {
        self.components.iter().filter_map(|(k, c)| c.keys().next().map(|e| (k.clone(), e - e.floor()))).collect()
    }

    /// Same data with a different available precision.
    pub fn with_max_exponent(&self, p: Rat) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|(k, c)| {
                (k.clone(), c.iter().filter(|(e, _)| **e <= p).map(|(e, v)| (e.clone(), v.clone())).collect())
            })
            .collect();
        VVForm::new(self.lattice.clone(), self.weight.clone(), comps, Some(self.d_min.clone()), Some(p))
    }

    /// Common denominator of all exponents and of `q` on dual vectors.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// `f(b, d)`.
    pub fn lookup(&self, b: &[i64], d: &Rat) -> Result<BigInt> {
        if b.len() != self.lattice.rank() {
            return Err(Error::Input("dimension mismatch in lookup".into()));
        }
        if *d <= self.d_min {
            return Ok(BigInt::zero());
        }
        if self.max_exponent.as_ref().is_some_and(|m| d > m) {
            return Err(self.precision_error(d.clone()));
        }
        if !(d * rat::int(self.scale)).is_integer() {
            return Ok(BigInt::zero());
        }
        let pos = self.lattice.disc_position(b);
        Ok(self.fast[pos].get(&scaled(d, self.scale)).cloned().unwrap_or_default())
    }

    /// `f` at component `pos` (a position in `disc_reps`) and exponent `n / scale`.
    pub(crate) fn lookup_scaled(&self, pos: usize, n: i64) -> Result<Option<&BigInt>> {
        if n <= self.d_min_scaled {
            return Ok(None);
        }
        if self.max_scaled.is_some_and(|m| n > m) {
            return Err(self.precision_error(rat::frac(n, self.scale)));
        }
        Ok(self.fast[pos].get(&n))
    }

    pub(crate) fn precision_error(&self, required: Rat) -> Error {
        Error::InsufficientPrecision {
            required: Box::new(required),
            available: self.max_exponent.clone().map(Box::new),
        }
    }

    /// Fails unless all exponents up to `d` are available.
    pub fn ensure_precision(&self, d: &Rat) -> Result<()> {
        match &self.max_exponent {
            Some(m) if d > m => Err(self.precision_error(d.clone())),
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = serde_json::Map::new();
        if self.lattice.name() == Some(crate::lattice::HERMITIAN_D3) {
            doc.insert("D".into(), serde_json::json!(-3));
        } else {
            doc.insert("lattice".into(), self.lattice.to_json());
        }
        doc.insert("weight".into(), serde_json::json!(rat::format(&self.weight)));
        if self.d_min_declared {
            doc.insert("d_min".into(), serde_json::json!(rat::format(&self.d_min)));
        }
        if self.precision_declared {
            if let Some(m) = &self.max_exponent {
                doc.insert("precision".into(), serde_json::json!(rat::format(m)));
            }
        }
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|(k, c)| {
                serde_json::json!({
                    "key": k.coords.to_vec(),
                    "terms": c.iter().map(|(e, v)| serde_json::json!({"exp": rat::format(e), "coeff": v.to_string()})).collect::<Vec<_>>(),
                })
            })
            .collect();
        doc.insert("components".into(), serde_json::Value::Array(comps));
        serde_json::Value::Object(doc)
    }
}

fn scaled(e: &Rat, scale: i64) -> i64 {
    (e * rat::int(scale)).floor().to_integer().to_i64().expect("exponent out of range")
}

/// Parses the canonical JSON interchange format.
pub fn parse_vvform(doc: &serde_json::Value) -> Result<VVForm> {
    let obj = doc.as_object().ok_or_else(|| Error::Schema("document must be an object".into()))?;
    let lattice = match (obj.get("D"), obj.get("lattice")) {
        (Some(d), None) => match d.as_i64() {
            Some(-3) => LatticeL0::hermitian_d3(),
            _ => return Err(Error::Schema(format!("unsupported discriminant {d}"))),
        },
        (None, Some(l)) => LatticeL0::from_json(l)?,
        _ => return Err(Error::Schema("exactly one of \"D\" and \"lattice\" is required".into())),
    };
    let weight = rat::parse_json(obj.get("weight").ok_or_else(|| Error::Schema("missing \"weight\"".into()))?)?;
    let d_min = obj.get("d_min").map(rat::parse_json).transpose()?;
    let precision = obj.get("precision").map(rat::parse_json).transpose()?;
    let comps = obj
        .get("components")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::Schema("missing \"components\" array".into()))?;
    let mut components = BTreeMap::new();
    for comp in comps {
        let key: Vec<i64> = comp
            .get("key")
            .and_then(|k| k.as_array())
            .ok_or_else(|| Error::Schema("component without \"key\"".into()))?
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| Error::Schema("key entries must be integers".into())))
            .collect::<Result<_>>()?;
        if key.len() != lattice.rank() || !lattice.is_reduced(&key) {
            return Err(Error::NonReducedKey(key));
        }
        let terms = comp
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Schema(format!("component {key:?} without \"terms\"")))?;
        let mut map = Component::new();
        for term in terms {
            let e = rat::parse_json(
                term.get("exp").ok_or_else(|| Error::Schema(format!("term without \"exp\" in {key:?}")))?,
            )?;
            let c = term.get("coeff").ok_or_else(|| Error::Schema(format!("term without \"coeff\" in {key:?}")))?;
            let v = parse_coefficient(c).map_err(|value| Error::NonIntegral {
                key: key.clone(),
                exp: rat::format(&e),
                value,
            })?;
            if map.insert(e.clone(), v).is_some() {
                return Err(Error::Schema(format!("duplicate exponent {} in {key:?}", rat::format(&e))));
            }
        }
        map.retain(|_, v| !v.is_zero());
        let k = DiscElement { coords: key.iter().copied().collect() };
        if components.insert(k, map).is_some() {
            return Err(Error::Schema(format!("duplicate component {key:?}")));
        }
    }
    VVForm::new(Arc::new(lattice), weight, components, d_min, precision)
}

fn parse_coefficient(v: &serde_json::Value) -> std::result::Result<BigInt, String> {
    let text = match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Number(n) => n.to_string(),
        other => return Err(other.to_string()),
    };
    if let Ok(n) = text.trim().parse::<BigInt>() {
        return Ok(n);
    }
    match rat::parse(&text) {
        Ok(r) if r.is_integer() => Ok(r.to_integer()),
        _ => Err(text),
    }
}

/// `(a_neg, D)` with `a_neg = -(B - c_W - 1)^2 d_min` and
/// `D = max(0, (B - 1 - a_W + a_neg)(B - 1 - c_W))`.
pub fn required_precision(b: i64, w: &WeylData, d_min: &Rat) -> (Rat, Rat) {
    let bm = rat::int(b - 1);
    let t = &bm - &w.c;
    let a_neg = -(&t * &t) * d_min;
    let d = (&bm - &w.a + &a_neg) * &t;
    let d = if d.is_negative() { Rat::zero() } else { d };
    (a_neg, d)
}

/// Converts the tuple-keyed dictionary layout, e.g.
/// `{ (0,0) : { 0 : 1, 1 : 2 }, (1,0) : { 1/3 : 4 } }`, into the canonical
/// JSON document for the given lattice.
pub fn convert_tuple_layout(text: &str, lattice: &LatticeL0, weight: &Rat) -> Result<serde_json::Value> {
    let mut p = TupleParser { s: text.as_bytes(), i: 0 };
    let entries = p.outer()?;
    let mut comps = Vec::new();
    for (key, terms) in entries {
        if key.len() != lattice.rank() || !lattice.is_reduced(&key) {
            return Err(Error::NonReducedKey(key));
        }
        comps.push(serde_json::json!({
            "key": key,
            "terms": terms.iter().map(|(e, c)| serde_json::json!({"exp": rat::format(e), "coeff": rat::format(c)})).collect::<Vec<_>>(),
        }));
    }
    let mut doc = serde_json::Map::new();
    if lattice.name() == Some(crate::lattice::HERMITIAN_D3) {
        doc.insert("D".into(), serde_json::json!(-3));
    } else {
        doc.insert("lattice".into(), lattice.to_json());
    }
    doc.insert("weight".into(), serde_json::json!(rat::format(weight)));
    doc.insert("components".into(), serde_json::Value::Array(comps));
    Ok(serde_json::Value::Object(doc))
}

struct TupleParser<'a> {
    s: &'a [u8],
    i: usize,
}

type TupleEntries = Vec<(Vec<i64>, Vec<(Rat, Rat)>)>;

impl TupleParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] as char).is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Schema(format!("expected '{}' at offset {}", c as char, self.i)))
        }
    }

    fn number(&mut self) -> Result<Rat> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && matches!(self.s[self.i], b'-' | b'+' | b'/' | b'0'..=b'9' | b' ') {
            if self.s[self.i] == b' ' {
                // allow "1 / 3" but stop before separators
                let rest = &self.s[self.i..];
                let next = rest.iter().find(|c| **c != b' ').copied();
                if next != Some(b'/') && !matches!(self.s[self.i - 1], b'/') {
                    break;
                }
            }
            self.i += 1;
        }
        let tok = std::str::from_utf8(&self.s[start..self.i]).unwrap().replace(' ', "");
        rat::parse(&tok)
    }

    fn outer(&mut self) -> Result<TupleEntries> {
        let mut out = Vec::new();
        self.expect(b'{')?;
        if self.peek() == Some(b'}') {
            self.i += 1;
            return Ok(out);
        }
        loop {
            self.expect(b'(')?;
            let mut key = Vec::new();
            loop {
                let n = self.number()?;
                if !n.is_integer() {
                    return Err(Error::Schema("tuple keys must be integral".into()));
                }
                key.push(n.to_integer().to_i64().ok_or_else(|| Error::Schema("key out of range".into()))?);
                match self.peek() {
                    Some(b',') => self.i += 1,
                    _ => break,
                }
            }
            self.expect(b')')?;
            self.expect(b':')?;
            self.expect(b'{')?;
            let mut terms = Vec::new();
            if self.peek() != Some(b'}') {
                loop {
                    let e = self.number()?;
                    self.expect(b':')?;
                    let c = self.number()?;
                    terms.push((e, c));
                    match self.peek() {
                        Some(b',') => self.i += 1,
                        _ => break,
                    }
                }
            }
            self.expect(b'}')?;
            out.push((key, terms));
            match self.peek() {
                Some(b',') => self.i += 1,
                _ => break,
            }
        }
        self.expect(b'}')?;
        Ok(out)
    }
}
