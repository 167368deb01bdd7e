//! The `weilcomp` command line.

pub mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use crate::characters::DirichletCharacter;
use crate::component_maps::{phi, phi_inverse, ScalarFormDecomposition};
use crate::error::{Error, Result};
use crate::exactnum::int;
use crate::fixtures::{self, FixtureFile};
use crate::fqm_weil::{FiniteQuadraticModule, VectorValuedForm};
use crate::hilbert_lift::{
    dn_restriction_direct, scalar_shimura, shimura_lift, theta_contract, theta_product_check, HilbertContext,
    ThetaProductReport,
};
use crate::qseries::QSeries;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "weilcomp", version, about = "Exact component sums and theta lifts of vector-valued modular forms")]
pub struct Cli {
    /// Also print floating-point approximations of the coefficients.
    #[arg(long, global = true)]
    pub approx: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Signature of a finite quadratic module, with the table row it falls in.
    Signature { module: PathBuf },
    /// Twisted component sum of a form, or its inverse.
    Phi {
        /// A vector-valued form (or, with --inverse, a decomposition).
        input: PathBuf,
        #[arg(long = "char")]
        character: Option<PathBuf>,
        #[arg(long, requires = "al")]
        inverse: bool,
        /// AL series: one for order p, plus and minus for order 2p.
        #[arg(long, num_args = 1..=2)]
        al: Vec<PathBuf>,
        /// Print only the summed series.
        #[arg(long)]
        total: bool,
    },
    /// Theta contraction, both Shimura routes and the theta product identity.
    Pipeline {
        form: PathBuf,
        context: Option<PathBuf>,
        #[arg(long = "psi-l")]
        psi_l: Option<PathBuf>,
        #[arg(long = "psi-p")]
        psi_p: Option<PathBuf>,
        /// Compute the lifted series below q^N.
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Run the acceptance suite over the bundled fixtures.
    Verify {
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 20)]
        seed: u64,
    },
    /// Write the bundled fixtures as JSON.
    ExportFixtures { dir: Option<PathBuf> },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// A fixture file, or a bare form wrapped as one.
pub fn read_form(path: &Path) -> Result<FixtureFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if value.get("schema").is_some() {
        return FixtureFile::from_json(&text);
    }
    let form: VectorValuedForm = serde_json::from_value(value).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Some(v) = form.validate()?.first() {
        return Err(Error::invalid(format!("{}: {v}", path.display())));
    }
    Ok(FixtureFile {
        schema: fixtures::SCHEMA,
        provenance: path.display().to_string(),
        form,
        context: None,
        psi_p: None,
        psi_ell: None,
    })
}

/// Everything the pipeline command computes.
#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub theta: VectorValuedForm,
    pub product: ThetaProductReport,
    pub shimura: QSeries,
    pub restriction: QSeries,
    pub scalar: QSeries,
}

impl PipelineOutcome {
    /// (name, first differing exponent) for each identity checked.
    pub fn checks(&self) -> Vec<(&'static str, Option<crate::exactnum::Rational>)> {
        vec![
            ("theta product identity", self.product.first_difference.clone()),
            ("Shimura lift = direct restriction", self.shimura.first_difference(&self.restriction, None)),
            ("scalar read-off = Shimura lift", self.scalar.first_difference(&self.shimura, None)),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.checks().iter().all(|(_, d)| d.is_none())
    }
}

/// Largest N with a²/(4ℓ) below the precision of ΘF for all a < N.
pub fn default_lift_precision(theta: &VectorValuedForm) -> i64 {
    let bound = theta.precision() * int(4 * theta.module().p() as i64);
    let mut a = 1i64;
    while int(a * a) < bound {
        a += 1;
    }
    a
}

pub fn run_pipeline(
    fx: &FixtureFile,
    psi_p: Option<&DirichletCharacter>,
    psi_l: Option<&DirichletCharacter>,
    precision: Option<i64>,
) -> Result<PipelineOutcome> {
    let ctx: &HilbertContext = fx.context()?;
    let psi_p = match psi_p {
        Some(c) => c,
        None => fx.psi_p()?,
    };
    let psi_l = if ctx.ell() == ctx.p() {
        psi_p
    } else {
        psi_l.or(fx.psi_ell.as_ref()).ok_or_else(|| Error::invalid("a character mod ell is required"))?
    };
    if psi_l.modulus() != ctx.ell() {
        return Err(Error::ModulusMismatch { expected: ctx.ell(), found: psi_l.modulus() });
    }
    let theta = theta_contract(&fx.form, ctx)?;
    let n = precision.unwrap_or_else(|| default_lift_precision(&theta));
    let product = theta_product_check(&fx.form, ctx, psi_p, Some(psi_l))?;
    let shimura = shimura_lift(&theta, n)?;
    let restriction = dn_restriction_direct(&fx.form, ctx, n)?;
    let k = fx.form.weight2() / 2;
    let scalar = scalar_shimura(&product.lhs, psi_l, k, ctx.p(), n)?;
    Ok(PipelineOutcome { theta, product, shimura, restriction, scalar })
}

fn approx_lines(label: &str, s: &QSeries) -> String {
    let mut out = format!("{label} (approx):");
    for (e, c) in s.iter() {
        let z = c.to_complex();
        out.push_str(&format!(" [{e}: {:.6}{:+.6}i]", z.re, z.im));
    }
    out
}

fn approx_json(s: &QSeries) -> serde_json::Value {
    s.iter()
        .map(|(e, c)| {
            let z = c.to_complex();
            serde_json::json!([e.to_string(), z.re, z.im])
        })
        .collect()
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_signature(path: &Path) -> Result<u8> {
    let a: FiniteQuadraticModule = read_json(path)?;
    let sig = a.signature()?;
    println!("{sig}");
    let kind = if a.is_order_p() { "order p".to_string() } else { format!("order 2p, delta = {:+}", a.delta().unwrap_or(0)) };
    println!(
        "table row: {kind}, p = {} = {} mod 4, epsilon = {:+} -> {}",
        a.p(),
        a.p() % 4,
        a.epsilon(),
        a.signature_table()
    );
    Ok(if sig == a.signature_table() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_phi(input: &Path, character: Option<&Path>, inverse: bool, al: &[PathBuf], total: bool, approx: bool) -> Result<u8> {
    if inverse {
        let g: ScalarFormDecomposition = read_json(input)?;
        let al: Vec<QSeries> = al.iter().map(|p| read_json(p)).collect::<Result<_>>()?;
        let f = phi_inverse(&g, &al)?;
        print_json(&f);
        return Ok(EXIT_PASS);
    }
    let fx = read_form(input)?;
    let chi: DirichletCharacter = match character {
        Some(p) => read_json(p)?,
        None => fx.psi_p()?.clone(),
    };
    let g = phi(&fx.form, &chi)?;
    let sign = fx.form.symmetry_sign()?;
    if chi.parity() != sign {
        eprintln!("warning: character parity {} does not match the symmetry {sign}; the sum vanishes", chi.parity());
    }
    let sum = g.total();
    match (total, approx) {
        (true, false) => print_json(&sum),
        (true, true) => print_json(&serde_json::json!({ "series": sum, "approx": approx_json(&sum) })),
        (false, false) => print_json(&g),
        (false, true) => {
            let mut v = serde_json::to_value(&g).expect("serializable");
            v["approx"] = approx_json(&sum);
            print_json(&v);
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_pipeline(
    form: &Path,
    context: Option<&Path>,
    psi_l: Option<&Path>,
    psi_p: Option<&Path>,
    precision: Option<i64>,
    approx: bool,
) -> Result<u8> {
    let mut fx = read_form(form)?;
    if let Some(c) = context {
        fx.context = Some(read_json(c)?);
    }
    let psi_l: Option<DirichletCharacter> = psi_l.map(read_json).transpose()?;
    let psi_p: Option<DirichletCharacter> = psi_p.map(read_json).transpose()?;
    let out = run_pipeline(&fx, psi_p.as_ref(), psi_l.as_ref(), precision)?;
    println!("theta contraction: weight {}, {} components, known below q^{}", out.theta.weight(), out.theta.components().len(), out.theta.precision());
    println!("phi(theta F) = {}", out.product.lhs);
    println!("Shimura lift = {}", out.shimura);
    if approx {
        println!("{}", approx_lines("Shimura lift", &out.shimura));
    }
    for (name, diff) in out.checks() {
        match diff {
            None => println!("PASS {name}"),
            Some(e) => println!("FAIL {name}: first difference at q^{e}"),
        }
    }
    Ok(if out.all_hold() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_verify(json: bool, seed: u64) -> Result<u8> {
    let results = verify::run_suite(seed)?;
    if json {
        print_json(&results);
    } else {
        for r in &results {
            println!("{r}");
        }
    }
    let code = if results.iter().any(|r| r.status == verify::Status::Fail) {
        EXIT_FAIL
    } else if results.iter().any(|r| r.status == verify::Status::Shortfall) {
        EXIT_PRECISION
    } else {
        EXIT_PASS
    };
    Ok(code)
}

fn cmd_export(dir: Option<&Path>) -> Result<u8> {
    let dir = dir.map(Path::to_path_buf).or_else(fixtures::fixture_dir).unwrap_or_else(|| PathBuf::from("fixtures"));
    for p in fixtures::export(&dir)? {
        println!("{}", p.display());
    }
    Ok(EXIT_PASS)
}

pub fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Signature { module } => cmd_signature(module),
        Command::Phi { input, character, inverse, al, total } => {
            cmd_phi(input, character.as_deref(), *inverse, al, *total, cli.approx)
        }
        Command::Pipeline { form, context, psi_l, psi_p, precision } => cmd_pipeline(
            form,
            context.as_deref(),
            psi_l.as_deref(),
            psi_p.as_deref(),
            *precision,
            cli.approx,
        ),
        Command::Verify { json, seed } => cmd_verify(*json, *seed),
        Command::ExportFixtures { dir } => cmd_export(dir.as_deref()),
    }
}

/// Exit code for an error: 3 for a precision shortfall, 2 otherwise.
pub fn error_code(e: &Error) -> u8 {
    if e.is_precision() {
        EXIT_PRECISION
    } else {
        EXIT_INPUT
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
