//! Bundled input forms for the two worked examples, and fixture file loading.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::exactnum::{int, rat, CycNumber, Rational};
use crate::fqm_weil::VectorValuedForm;
use crate::hilbert_lift::{HilbertContext, QuadElt};
use crate::qseries::QSeries;

pub const SCHEMA: u32 = 1;
pub const FIXTURE_ENV: &str = "WEILCOMP_FIXTURES";
pub const NAMES: [&str; 2] = ["example1", "example2"];

const EXAMPLE1_JSON: &str = include_str!("../fixtures/example1.json");
const EXAMPLE2_JSON: &str = include_str!("../fixtures/example2.json");

/// A form on O_K^#/O_K with the field data and characters it is meant to be run with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub schema: u32,
    pub provenance: String,
    #[serde(flatten)]
    pub form: VectorValuedForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<HilbertContext>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_p: Option<DirichletCharacter>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_ell: Option<DirichletCharacter>,
}

impl FixtureFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let f: FixtureFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if f.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported fixture schema {}", f.schema)));
        }
        if let Some(v) = f.form.validate()?.first() {
            return Err(Error::invalid(format!("fixture form is invalid: {v}")));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes") + "\n"
    }

    pub fn context(&self) -> Result<&HilbertContext> {
        self.context.as_ref().ok_or_else(|| Error::invalid("fixture has no context block"))
    }

    pub fn psi_p(&self) -> Result<&DirichletCharacter> {
        self.psi_p.as_ref().ok_or_else(|| Error::invalid("fixture has no psi_p"))
    }
}

/// The fixture directory named by WEILCOMP_FIXTURES, if set.
pub fn fixture_dir() -> Option<PathBuf> {
    std::env::var_os(FIXTURE_ENV).map(PathBuf::from)
}

pub fn load_file(path: &Path) -> Result<FixtureFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    FixtureFile::from_json(&text)
}

/// A bundled fixture by name, read from WEILCOMP_FIXTURES when set.
pub fn load(name: &str) -> Result<FixtureFile> {
    if let Some(dir) = fixture_dir() {
        return load_file(&dir.join(format!("{name}.json")));
    }
    match name {
        "example1" => FixtureFile::from_json(EXAMPLE1_JSON),
        "example2" => FixtureFile::from_json(EXAMPLE2_JSON),
        _ => Err(Error::invalid(format!("unknown fixture {name}"))),
    }
}

fn series(den: i64, terms: &[(i64, i64)], prec: i64) -> QSeries {
    QSeries::from_terms(
        terms.iter().map(|&(e, c)| (rat(e, den), CycNumber::from_int(c))),
        rat(prec, den),
    )
}

/// Places each series X at the classes of +x and −x (as X and −X), given the class index
/// of each label; the unused classes get zero at `zero_precision`.
fn assemble(
    ctx: &HilbertContext,
    pairs: &[(u64, u64, QSeries)],
    index: impl Fn(u64) -> Result<u64>,
    zero_precision: Rational,
) -> Result<Vec<QSeries>> {
    let p = ctx.p();
    let mut comps = vec![QSeries::zero(zero_precision); p as usize];
    for (plus, minus, s) in pairs {
        comps[index(*plus)? as usize] = s.clone();
        comps[index(*minus)? as usize] = s.neg();
    }
    Ok(comps)
}

/// p = 5, λ = 4 + √5, ℓ = 11, b = 7; weight 5, labels c/√5.
pub fn example1() -> Result<FixtureFile> {
    let ctx = HilbertContext::new(5, QuadElt::new(int(4), int(1)), 11, 7)?;
    let a = series(5, &[(1, 1), (6, 42), (11, -108), (16, -4), (21, -378)], 26);
    let b = series(5, &[(4, 26), (9, 39), (14, -378), (19, 140), (24, 420)], 29);
    let comps = assemble(&ctx, &[(3, 2, a), (4, 1, b)], |c| Ok(ctx.index_of_label(c)), rat(29, 5))?;
    Ok(FixtureFile {
        schema: SCHEMA,
        provenance: "example 1: p = 5, weight 5, coefficients as printed".into(),
        form: VectorValuedForm::checked(*ctx.source_module(), 10, comps)?,
        psi_p: Some(DirichletCharacter::from_exponent(5, 1, 4)?),
        psi_ell: Some(DirichletCharacter::from_exponent(11, 1, 10)?),
        context: Some(ctx),
    })
}

/// p = ℓ = 13, λ = (13 + 3√13)/2, b = 13; weight 3, labels a/λ.
pub fn example2() -> Result<FixtureFile> {
    let ctx = HilbertContext::new(13, QuadElt::new(rat(13, 2), rat(3, 2)), 13, 13)?;
    let s = |t: &[(i64, i64)], prec| series(13, t, prec);
    let pairs = [
        (1, 12, s(&[(1, 1), (14, -33), (27, 27), (40, 33)], 53)),
        (4, 9, s(&[(3, 3), (16, 5), (29, 42), (42, -99)], 55)),
        (2, 11, s(&[(4, -7), (17, -3), (30, -33), (43, 49)], 56)),
        (3, 10, s(&[(9, 0), (22, -22), (35, 33), (48, 15)], 61)),
        (6, 7, s(&[(10, 11), (23, -12), (36, 0), (49, 50)], 62)),
        (5, 8, s(&[(12, 21), (25, 14), (38, -66), (51, 9)], 64)),
    ];
    let inv = QuadElt::rational(int(1)).div(ctx.lambda(), 13)?;
    let comps = assemble(&ctx, &pairs, |a| ctx.index_of(&inv.scale(&int(a as i64))), rat(64, 13))?;
    Ok(FixtureFile {
        schema: SCHEMA,
        provenance: "example 2: p = 13, weight 3, coefficients as printed".into(),
        form: VectorValuedForm::checked(*ctx.source_module(), 6, comps)?,
        psi_p: Some(DirichletCharacter::from_exponent(13, 1, 12)?),
        psi_ell: None,
        context: Some(ctx),
    })
}

pub fn build(name: &str) -> Result<FixtureFile> {
    match name {
        "example1" => example1(),
        "example2" => example2(),
        _ => Err(Error::invalid(format!("unknown fixture {name}"))),
    }
}

/// Writes every bundled fixture into `dir`; returns the written paths.
pub fn export(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::invalid(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for name in NAMES {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, build(name)?.to_json()).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
        out.push(path);
    }
    Ok(out)
}
