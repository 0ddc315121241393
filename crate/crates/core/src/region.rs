//! Rate regions as subset-sum constraint polytopes.
//!
//! A region over `M` transmitters stores one bound `c_S` per nonempty subset
//! `S` it constrains; a rate vector `r` is a member iff `sum_{m in S} r_m <= c_S`
//! for every stored `S`. The full set is always present.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::channel::{CorrelationParam, CovarianceParam, RateVector};
use crate::error::{Error, Result};
use crate::scalar::{RateScalar, Real};
use crate::subset::{Subset, MAX_TRANSMITTERS};

/// Which bound a region represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Inner,
    Outer,
    Exact,
    Naive,
    Nonfeedback,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Inner => "inner",
            Provenance::Outer => "outer",
            Provenance::Exact => "exact",
            Provenance::Naive => "naive",
            Provenance::Nonfeedback => "nonfeedback",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion<T> {
    m: usize,
    constraints: BTreeMap<Subset, T>,
    per_receiver_sum: Vec<T>,
    provenance: Provenance,
}

impl<T: RateScalar> RateRegion<T> {
    /// Validates an explicit constraint map.
    pub fn new(m: usize, constraints: BTreeMap<Subset, T>, provenance: Provenance) -> Result<Self> {
        if m == 0 || m > MAX_TRANSMITTERS {
            return Err(Error::InvalidRegion(format!("unsupported dimension {m}")));
        }
        let full = Subset::full(m);
        for (s, c) in &constraints {
            if s.is_empty() || !s.is_subset_of(full) {
                return Err(Error::InvalidRegion(format!("key {s} is not a nonempty subset of 1..{m}")));
            }
            if !c.is_finite_value() || *c < T::zero() {
                return Err(Error::InvalidRegion(format!("bound {c} for {s} must be finite and nonnegative")));
            }
        }
        if !constraints.contains_key(&full) {
            return Err(Error::InvalidRegion("missing full-set constraint".into()));
        }
        Ok(Self { m, constraints, per_receiver_sum: Vec::new(), provenance })
    }

    /// Builds a region from proper-subset bounds and the per-receiver
    /// full-set bounds; the stored full-set entry is their minimum.
    pub fn from_parts(
        m: usize,
        proper: BTreeMap<Subset, T>,
        per_receiver_sum: Vec<T>,
        provenance: Provenance,
    ) -> Result<Self> {
        let full = per_receiver_sum
            .iter()
            .copied()
            .reduce(|a, b| if b < a { b } else { a })
            .ok_or_else(|| Error::InvalidRegion("no per-receiver sum bounds".into()))?;
        let mut constraints = proper;
        constraints.insert(Subset::full(m), full);
        let mut region = Self::new(m, constraints, provenance)?;
        region.per_receiver_sum = per_receiver_sum;
        Ok(region)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn constraints(&self) -> &BTreeMap<Subset, T> {
        &self.constraints
    }

    pub fn bound(&self, s: Subset) -> Option<T> {
        self.constraints.get(&s).copied()
    }

    pub fn full_bound(&self) -> T {
        self.constraints[&Subset::full(self.m)]
    }

    /// Per-receiver full-set bounds, when the region was built from them.
    pub fn per_receiver_sum(&self) -> &[T] {
        &self.per_receiver_sum
    }

    /// `true` iff every stored constraint holds within `tol`.
    pub fn contains(&self, r: &RateVector<T>, tol: T) -> Result<bool> {
        if r.len() != self.m {
            return Err(Error::Dimension { expected: self.m, found: r.len() });
        }
        let rates = r.as_slice();
        Ok(self.constraints.iter().all(|(s, &c)| {
            let sum = s.members().fold(T::zero(), |acc, i| acc + rates[i]);
            sum <= c + tol
        }))
    }

    /// Largest `r` with `(r, ..., r)` in the region: `min_S c_S / |S|`.
    pub fn sym_rate(&self) -> T {
        self.constraints
            .iter()
            .map(|(s, &c)| c / T::from_count(s.len()))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("full-set constraint always present")
    }

    /// Largest `R_m` with every other rate at zero (0-based `m`).
    pub fn max_single_rate(&self, m: usize) -> Result<T> {
        if m >= self.m {
            return Err(Error::Dimension { expected: self.m, found: m + 1 });
        }
        Ok(self
            .constraints
            .iter()
            .filter(|(s, _)| s.contains(m))
            .map(|(_, &c)| c)
            .reduce(|a, b| if b < a { b } else { a })
            .expect("full set contains every transmitter"))
    }

    /// Compact inequality listing, e.g. `{R1≤3, R2≤3, R1+R2≤3}`.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .constraints
            .iter()
            .map(|(s, c)| {
                let lhs: Vec<String> = s.members().map(|i| format!("R{}", i + 1)).collect();
                format!("{}≤{}", lhs.join("+"), format_bound(c.as_f64()))
            })
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// JSON object keyed by comma-joined 1-based indices.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (s, c) in &self.constraints {
            map.insert(s.key(), Value::from(c.as_f64()));
        }
        Value::Object(map)
    }
}

fn format_bound(v: f64) -> String {
    if (v - v.round()).abs() < 1e-12 {
        format!("{}", v.round())
    } else {
        format!("{v:.6}")
    }
}

/// One line per constraint, `S={1,3}: 4.233931 bits`, sorted by bitmask.
impl<T: RateScalar> fmt::Display for RateRegion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in &self.constraints {
            writeln!(f, "S={s}: {:.6} bits", c.as_f64())?;
        }
        Ok(())
    }
}

/// Parameter that produced a member of a region family.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamDescriptor<T: Real> {
    Rho(CorrelationParam<T>),
    Covariance(CovarianceParam<T>),
}

impl<T: Real> ParamDescriptor<T> {
    /// The scalar ρ, or the minimum off-diagonal magnitude of a covariance.
    pub fn rho(&self) -> T {
        match self {
            ParamDescriptor::Rho(r) => r.value(),
            ParamDescriptor::Covariance(k) => k.min_rho().value(),
        }
    }
}

/// Regions indexed by the correlation parameter that generated them. The
/// union over members is the bound the family represents.
#[derive(Clone, Debug)]
pub struct RegionFamily<T: Real> {
    members: Vec<(ParamDescriptor<T>, RateRegion<T>)>,
}

impl<T: Real> RegionFamily<T> {
    pub fn new(members: Vec<(ParamDescriptor<T>, RateRegion<T>)>) -> Result<Self> {
        let m = members
            .first()
            .map(|(_, r)| r.dim())
            .ok_or_else(|| Error::InvalidRegion("empty region family".into()))?;
        if let Some((_, r)) = members.iter().find(|(_, r)| r.dim() != m) {
            return Err(Error::Dimension { expected: m, found: r.dim() });
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(ParamDescriptor<T>, RateRegion<T>)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `true` iff some member contains `r`.
    pub fn contains(&self, r: &RateVector<T>, tol: T) -> Result<bool> {
        for (_, region) in &self.members {
            if region.contains(r, tol)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Max of `sym_rate` over the family and the parameter attaining it; the
/// earliest member wins ties.
pub fn family_sym_capacity<T: Real>(family: &RegionFamily<T>) -> (T, &ParamDescriptor<T>) {
    let mut best = (family.members[0].1.sym_rate(), &family.members[0].0);
    for (param, region) in &family.members[1..] {
        let r = region.sym_rate();
        if r > best.0 {
            best = (r, param);
        }
    }
    best
}

/// Parameters at which an outer/inner pair was compared.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchedParams<T: Real> {
    pub outer: ParamDescriptor<T>,
    pub inner: ParamDescriptor<T>,
}

/// Constraint-wise differences between an outer and an inner region.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport<T: Real> {
    /// `c_outer(S) - c_inner(S)` for every stored `S`, full set included.
    pub deltas: BTreeMap<Subset, T>,
    pub delta_sum: T,
    /// `delta_S / |S|`.
    pub per_transmitter: BTreeMap<Subset, T>,
    /// Declared per-transmitter bound Δ.
    pub bound: T,
    pub matched: Option<MatchedParams<T>>,
    /// Failed checks, human readable; empty iff `pass`.
    pub violations: Vec<String>,
    pub pass: bool,
}

impl<T: Real> GapReport<T> {
    pub fn max_per_transmitter(&self) -> T {
        self.per_transmitter
            .values()
            .copied()
            .reduce(|a, b| if b > a { b } else { a })
            .unwrap_or_else(T::zero)
    }

    pub(crate) fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
            self.pass = false;
        }
    }

    /// `{deltas: {...}, bound: Δ, pass: bool, rho: ...}`
    pub fn to_json(&self) -> Value {
        let mut deltas = Map::new();
        for (s, d) in &self.deltas {
            deltas.insert(s.key(), Value::from(d.as_f64()));
        }
        let mut out = Map::new();
        out.insert("deltas".into(), Value::Object(deltas));
        out.insert("bound".into(), Value::from(self.bound.as_f64()));
        out.insert("pass".into(), Value::from(self.pass));
        out.insert(
            "rho".into(),
            self.matched.as_ref().map_or(Value::Null, |p| Value::from(p.inner.rho().as_f64())),
        );
        if !self.violations.is_empty() {
            out.insert("violations".into(), Value::from(self.violations.clone()));
        }
        Value::Object(out)
    }
}

/// Checks `c_outer(S) - c_inner(S) <= |S|·Δ + 1e-9` for every stored `S`.
pub fn constraintwise_gap<T: Real>(outer: &RateRegion<T>, inner: &RateRegion<T>, bound: T) -> Result<GapReport<T>> {
    if outer.dim() != inner.dim() {
        return Err(Error::Dimension { expected: outer.dim(), found: inner.dim() });
    }
    if !outer.constraints.keys().eq(inner.constraints.keys()) {
        return Err(Error::KeyMismatch);
    }
    let slack = T::lit(1e-9);
    let mut report = GapReport {
        deltas: BTreeMap::new(),
        delta_sum: outer.full_bound() - inner.full_bound(),
        per_transmitter: BTreeMap::new(),
        bound,
        matched: None,
        violations: Vec::new(),
        pass: true,
    };
    for ((&s, &co), &ci) in outer.constraints.iter().zip(inner.constraints.values()) {
        let delta = co - ci;
        let size = T::from_count(s.len());
        report.deltas.insert(s, delta);
        report.per_transmitter.insert(s, delta / size);
        report.record(delta.is_finite_value() && delta <= size * bound + slack, || {
            format!("delta_{s} = {delta} exceeds {size}·{bound}")
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn region2(c1: f64, c2: f64, c12: f64) -> RateRegion<f64> {
        let constraints = BTreeMap::from([
            (Subset::singleton(0), c1),
            (Subset::singleton(1), c2),
            (Subset::full(2), c12),
        ]);
        RateRegion::new(2, constraints, Provenance::Exact).unwrap()
    }

    fn rv(r: &[f64]) -> RateVector<f64> {
        RateVector::new(r.to_vec()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let r = region2(3.0, 3.0, 3.0);
        assert!(r.contains(&rv(&[1.5, 1.5]), 0.0).unwrap());
        assert!(!r.contains(&rv(&[2.0, 1.5]), 0.0).unwrap());
        assert!(r.contains(&rv(&[0.0, 0.0]), 0.0).unwrap());
        assert!(matches!(r.contains(&rv(&[0.0]), 0.0), Err(Error::Dimension { .. })));
    }

    #[test]
    fn sym_rate_examples() {
        assert_eq!(region2(3.0, 3.0, 3.0).sym_rate(), 1.5);
        assert_eq!(region2(0.0, 5.0, 5.0).sym_rate(), 0.0);
    }

    #[test]
    fn max_single_rate_examples() {
        assert_eq!(region2(3.0, 3.0, 3.0).max_single_rate(0).unwrap(), 3.0);
        assert_eq!(region2(5.0, 9.0, 2.0).max_single_rate(0).unwrap(), 2.0);
        assert_eq!(region2(0.0, 9.0, 2.0).max_single_rate(0).unwrap(), 0.0);
        assert!(region2(0.0, 9.0, 2.0).max_single_rate(2).is_err());
    }

    #[test]
    fn exact_rational_region() {
        let three = Rational64::from_integer(3);
        let constraints = BTreeMap::from([
            (Subset::singleton(0), three),
            (Subset::singleton(1), three),
            (Subset::full(2), three),
        ]);
        let r = RateRegion::new(2, constraints, Provenance::Exact).unwrap();
        assert_eq!(r.sym_rate(), Rational64::new(3, 2));
        assert_eq!(r.summary(), "{R1≤3, R2≤3, R1+R2≤3}");
    }

    #[test]
    fn invalid_regions_rejected() {
        let missing_full = BTreeMap::from([(Subset::singleton(0), 1.0)]);
        assert!(RateRegion::new(2, missing_full, Provenance::Inner).is_err());
        let negative = BTreeMap::from([(Subset::full(2), -1.0)]);
        assert!(RateRegion::new(2, negative, Provenance::Inner).is_err());
        let out_of_range = BTreeMap::from([(Subset::full(2), 1.0), (Subset::singleton(4), 1.0)]);
        assert!(RateRegion::new(2, out_of_range, Provenance::Inner).is_err());
        let nan = BTreeMap::from([(Subset::full(2), f64::NAN)]);
        assert!(RateRegion::new(2, nan, Provenance::Inner).is_err());
    }

    #[test]
    fn pretty_printer_format() {
        let constraints = BTreeMap::from([
            (Subset::from_indices([0, 2]), 4.233931),
            (Subset::singleton(0), 1.0),
            (Subset::full(3), 5.0),
        ]);
        let r = RateRegion::new(3, constraints, Provenance::Outer).unwrap();
        assert_eq!(r.to_string(), "S={1}: 1.000000 bits\nS={1,3}: 4.233931 bits\nS={1,2,3}: 5.000000 bits\n");
        assert_eq!(r.to_json()["1,3"], Value::from(4.233931));
    }

    #[test]
    fn full_set_is_min_over_receivers() {
        let proper = BTreeMap::from([(Subset::singleton(0), 2.0), (Subset::singleton(1), 2.0)]);
        let r = RateRegion::from_parts(2, proper, vec![4.0, 3.0, 5.0], Provenance::Inner).unwrap();
        assert_eq!(r.full_bound(), 3.0);
        assert_eq!(r.per_receiver_sum(), &[4.0, 3.0, 5.0]);
    }

    #[test]
    fn gap_of_region_with_itself() {
        let r = region2(1.0, 2.0, 2.5);
        let report = constraintwise_gap(&r, &r, 0.0).unwrap();
        assert!(report.pass);
        assert!(report.deltas.values().all(|&d| d == 0.0));
        assert_eq!(report.delta_sum, 0.0);
    }

    #[test]
    fn gap_key_mismatch() {
        let a = region2(1.0, 2.0, 2.5);
        let b = RateRegion::new(2, BTreeMap::from([(Subset::full(2), 1.0)]), Provenance::Inner).unwrap();
        assert!(matches!(constraintwise_gap(&a, &b, 1.0), Err(Error::KeyMismatch)));
    }

    #[test]
    fn gap_violation_flagged() {
        let outer = region2(3.0, 1.0, 2.0);
        let inner = region2(1.0, 1.0, 2.0);
        let report = constraintwise_gap(&outer, &inner, 1.0).unwrap();
        assert!(!report.pass);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.deltas[&Subset::singleton(0)], 2.0);
    }

    #[test]
    fn family_tie_breaks_to_first() {
        let rho = |v: f64| ParamDescriptor::Rho(CorrelationParam::new(v).unwrap());
        let fam = RegionFamily::new(vec![
            (rho(0.1), region2(1.0, 1.0, 1.0)),
            (rho(0.2), region2(2.0, 2.0, 3.0)),
            (rho(0.3), region2(2.0, 2.0, 3.0)),
        ])
        .unwrap();
        let (c, p) = family_sym_capacity(&fam);
        assert_eq!(c, 1.5);
        assert_eq!(p.rho(), 0.2);
        assert!(RegionFamily::<f64>::new(vec![]).is_err());
    }
}
