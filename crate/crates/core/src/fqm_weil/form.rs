//! Vector-valued forms for ρ*: one q-series per element of the module.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{int, parse_rational, rat, CycNumber, Rational};
use crate::qseries::QSeries;

use super::FiniteQuadraticModule;

#[derive(Debug, Clone, PartialEq)]
pub struct VectorValuedForm {
    module: FiniteQuadraticModule,
    // 2k
    weight2: i64,
    components: Vec<QSeries>,
}

/// One failed invariant of a vector-valued form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ComponentCount { expected: usize, found: usize },
    WeightParity { weight2: i64, signature: u8 },
    Support { gamma: u64, exponent: Rational },
    Symmetry { gamma: u64, exponent: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ComponentCount { expected, found } => {
                write!(f, "expected {expected} components, found {found}")
            }
            Violation::WeightParity { weight2, signature } => {
                write!(f, "weight {weight2}/2 is not admissible for signature {signature}")
            }
            Violation::Support { gamma, exponent } => {
                write!(f, "component {gamma}: exponent {exponent} is not in Z - Q({gamma})")
            }
            Violation::Symmetry { gamma, exponent } => {
                write!(f, "component {gamma}: symmetry under gamma -> -gamma fails at q^{exponent}")
            }
        }
    }
}

impl VectorValuedForm {
    /// Builds a form without validating it; see [`VectorValuedForm::validate`].
    pub fn new(module: FiniteQuadraticModule, weight2: i64, components: Vec<QSeries>) -> Self {
        VectorValuedForm { module, weight2, components }
    }

    /// Builds a form and rejects it if any invariant fails.
    pub fn checked(module: FiniteQuadraticModule, weight2: i64, components: Vec<QSeries>) -> Result<Self> {
        let f = Self::new(module, weight2, components);
        let v = f.validate()?;
        if let Some(first) = v.first() {
            return Err(Error::invalid(format!("invalid vector-valued form: {first}")));
        }
        Ok(f)
    }

    pub fn zero(module: FiniteQuadraticModule, weight2: i64, precision: Rational) -> Self {
        let components = module.elements().map(|_| QSeries::zero(precision.clone())).collect();
        VectorValuedForm { module, weight2, components }
    }

    pub fn module(&self) -> &FiniteQuadraticModule {
        &self.module
    }

    pub fn weight2(&self) -> i64 {
        self.weight2
    }

    pub fn weight(&self) -> Rational {
        rat(self.weight2, 2)
    }

    pub fn component(&self, g: u64) -> &QSeries {
        &self.components[(g % self.module.order()) as usize]
    }

    pub fn components(&self) -> &[QSeries] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(QSeries::is_zero)
    }

    /// Smallest component precision.
    pub fn precision(&self) -> Rational {
        self.components
            .iter()
            .map(|c| c.precision().clone())
            .min()
            .unwrap_or_else(Rational::zero)
    }

    /// (−1)^{k + sig/2}, the sign with F_{−γ} = sign·F_γ.
    pub fn symmetry_sign(&self) -> Result<i32> {
        let sig = self.module.signature()? as i64;
        let twice = self.weight2 + sig;
        if twice % 2 != 0 {
            return Err(Error::invalid(format!(
                "weight {}/2 is not admissible for signature {sig}",
                self.weight2
            )));
        }
        Ok(if (twice / 2) % 2 == 0 { 1 } else { -1 })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.module != other.module || self.weight2 != other.weight2 {
            return Err(Error::invalid("adding forms of different type"));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect();
        Ok(Self::new(self.module, self.weight2, components))
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        Self::new(self.module, self.weight2, self.components.iter().map(|s| s.scale(c)).collect())
    }

    /// Replaces one component; used for fault injection and perturbation tests.
    pub fn with_component(&self, g: u64, series: QSeries) -> Self {
        let mut out = self.clone();
        out.components[g as usize] = series;
        out
    }

    /// All invariant violations (empty for a valid form).
    pub fn validate(&self) -> Result<Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.module.order() as usize;
        if self.components.len() != n {
            out.push(Violation::ComponentCount { expected: n, found: self.components.len() });
            return Ok(out);
        }
        let sig = self.module.signature()?;
        if (self.weight2 + sig as i64) % 2 != 0 {
            out.push(Violation::WeightParity { weight2: self.weight2, signature: sig });
            return Ok(out);
        }
        for g in self.module.elements() {
            let q = self.module.q_value(g);
            for (e, _) in self.component(g).iter() {
                if !(&e + &q).is_integer() {
                    out.push(Violation::Support { gamma: g, exponent: e });
                }
            }
        }
        let sign = CycNumber::from_int(self.symmetry_sign()? as i64);
        for g in self.module.elements() {
            let h = self.module.neg(g);
            if h < g {
                continue;
            }
            let lhs = self.component(h);
            let rhs = self.component(g).scale(&sign);
            if let Some(e) = lhs.first_difference(&rhs, None) {
                out.push(Violation::Symmetry { gamma: g, exponent: e });
            }
        }
        Ok(out)
    }
}

/// JSON form {"module": .., "weight": "k", "components": [series for γ = 0, 1, ...]}.
#[derive(Serialize, Deserialize)]
struct FormJson {
    module: FiniteQuadraticModule,
    weight: String,
    components: Vec<QSeries>,
}

impl Serialize for VectorValuedForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson { module: self.module, weight: self.weight().to_string(), components: self.components.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VectorValuedForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = FormJson::deserialize(d)?;
        let w = parse_rational(&raw.weight).map_err(D::Error::custom)?;
        let w2 = w * int(2);
        if !w2.is_integer() {
            return Err(D::Error::custom("weight must be a half-integer"));
        }
        let w2: i64 = w2.to_integer().try_into().map_err(D::Error::custom)?;
        Ok(VectorValuedForm::new(raw.module, w2, raw.components))
    }
}

impl fmt::Display for VectorValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "weight {} form on {}", self.weight(), self.module)?;
        for (g, c) in self.components.iter().enumerate() {
            writeln!(f, "  e_{g}: {c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> VectorValuedForm {
        // order 5, α = 4: Q(1) = 4/5, Q(2) = 1/5; weight 5 is antisymmetric for signature 0
        let a = FiniteQuadraticModule::order_p(5, 4).unwrap();
        let p = rat(26, 5);
        let f1 = QSeries::parse("-26*q^(1/5)", p.clone()).unwrap();
        let f2 = QSeries::parse("-q^(4/5)", p.clone()).unwrap();
        VectorValuedForm::new(a, 10, vec![QSeries::zero(p), f1.clone(), f2.clone(), f2.neg(), f1.neg()])
    }

    #[test]
    fn valid_and_invalid_forms() {
        let f = toy();
        assert_eq!(f.symmetry_sign().unwrap(), -1);
        assert!(f.validate().unwrap().is_empty());
        let zero = VectorValuedForm::zero(*f.module(), 10, int(3));
        assert!(zero.validate().unwrap().is_empty());
        // symmetric pairing at antisymmetric weight
        let bad = f.with_component(4, f.component(1).clone());
        assert!(matches!(bad.validate().unwrap()[0], Violation::Symmetry { gamma: 1, .. }));
        // exponent outside Z - Q(1)
        let bad = f.with_component(1, QSeries::parse("q^(2/5)", int(2)).unwrap());
        assert!(bad.validate().unwrap().iter().any(|v| matches!(v, Violation::Support { gamma: 1, .. })));
        let odd = VectorValuedForm::zero(*f.module(), 9, int(1));
        assert!(matches!(odd.validate().unwrap()[0], Violation::WeightParity { .. }));
    }

    #[test]
    fn json_round_trip() {
        let f = toy();
        let s = serde_json::to_string(&f).unwrap();
        let back: VectorValuedForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
