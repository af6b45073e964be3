//! Thin command-line front end over the library. Exit codes: 0 success,
//! 2 usage/parse, 3 construction not found, 4 hypothesis rejection,
//! 5 undecided at the precision cap, 1 internal failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::One;

use gelfond_lab::auxpoly::{construct_aux_poly, AuxCertificate};
use gelfond_lab::campaign::{report_to_jsonl, run_suite, summarize, CampaignConfig, SUITES};
use gelfond_lab::combinatorics::{partition_prop61, partition_prop62, zarankiewicz_oracle};
use gelfond_lab::error::GlError;
use gelfond_lab::factorgcd::{gcd_translates, verify_thm_g, ScaleSet};
use gelfond_lab::io;
use gelfond_lab::pipelines::{run_prop_q, run_prop_r, run_prop_rbis, run_prop_rter};
use gelfond_lab::resultants::verify_prop_fg;
use gelfond_lab::verdict::{digest_inputs, Certificate, Outcome, Verdict};

const BITS_CAP_ENV: &str = "GELFOND_LAB_BITS_CAP";

#[derive(Parser)]
#[command(name = "gelfond-lab", version, about = "Certified verification campaigns")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct CommonFlags {
    /// RNG seed; fully determines randomized campaigns
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// number of randomized trials
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// starting interval precision in bits
    #[arg(long)]
    bits: Option<u32>,
    /// precision cap in bits (overrides GELFOND_LAB_BITS_CAP)
    #[arg(long)]
    bits_cap: Option<u32>,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// print aggregate counts instead of per-trial certificates
    #[arg(long)]
    summary: bool,
    /// worker threads for campaign trials
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification suite, or one instance via file flags
    Verify {
        /// one of: gauss propfg corpp detid lemmaH1 thmG partition61
        /// partition62 appendixB propZ efresultant
        suite: String,
        #[command(flatten)]
        common: CommonFlags,
        /// single-instance mode: evaluation points file
        #[arg(long)]
        points: Option<PathBuf>,
        /// single-instance mode: first polynomial file
        #[arg(long)]
        f: Option<PathBuf>,
        /// single-instance mode: second polynomial file
        #[arg(long)]
        g: Option<PathBuf>,
        /// single-instance mode: derivative order bound t
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Construct an auxiliary polynomial from a small-value spec
    Construct {
        /// spec JSON (single object or array for an n-sweep)
        spec: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Run a pipeline bundle and emit its stage trace
    Pipeline {
        /// bundle JSON with kind in {propQ, propR, propRbis, propRter}
        bundle: PathBuf,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Exact Zarankiewicz number with the section-9 upper bound
    Zarankiewicz { m1: usize, n1: usize, m: usize, n: usize },
    /// Verify the partition statements on explicit lattice sets
    Partition {
        /// set E (lattice-set file)
        #[arg(long)]
        e: PathBuf,
        /// set F (lattice-set file); defaults to the orbit of E
        #[arg(long)]
        f: Option<PathBuf>,
        /// run the depth-l variant instead of the basic one
        #[arg(long)]
        ell: Option<usize>,
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Gcd of scaled translates P(aT) with degree/height verdicts
    GcdTranslates {
        /// polynomial file
        #[arg(long)]
        poly: PathBuf,
        /// scale factors, e.g. --scales 2 3 5
        #[arg(long, num_args = 1.., required = true)]
        scales: Vec<String>,
        /// check the theorem bounds at this depth
        #[arg(long)]
        ell: Option<usize>,
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn exit_for(e: &GlError) -> u8 {
    match e {
        GlError::Parse(_) | GlError::Io(_) | GlError::Json(_) => 2,
        GlError::NotFound(_) => 3,
        GlError::HypothesisRejected(_) | GlError::Precondition(_) => 4,
        GlError::Undecided(_) => 5,
        _ => 1,
    }
}

fn emit(common: &CommonFlags, text: &str) -> Result<(), GlError> {
    match &common.out {
        Some(path) => io::write_string(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(common: &CommonFlags, certs: &[Certificate]) -> Result<u8, GlError> {
    let text = if common.summary {
        format!("{}\n", serde_json::to_string(&summarize(certs))?)
    } else {
        report_to_jsonl(certs)?
    };
    emit(common, &text)?;
    let all_hold = certs.iter().all(|c| c.verdict == Outcome::Holds);
    let any_undecided = certs.iter().any(|c| c.verdict == Outcome::Undecided);
    Ok(if all_hold {
        0
    } else if any_undecided {
        5
    } else {
        1
    })
}

fn cmd_verify(
    suite: &str,
    common: &CommonFlags,
    points: Option<&PathBuf>,
    f: Option<&PathBuf>,
    g: Option<&PathBuf>,
    t: usize,
) -> Result<u8, GlError> {
    if let (Some(pts), Some(fp), Some(gp)) = (points, f, g) {
        if suite != "propfg" {
            return Err(GlError::Parse("single-instance mode supports suite propfg".into()));
        }
        let fpoly = io::read_poly(fp)?;
        let gpoly = io::read_poly(gp)?;
        let e = io::read_points(pts)?;
        let n = fpoly.deg().max(gpoly.deg()).max(e.len() * t);
        let v = verify_prop_fg(&fpoly, &gpoly, &e, t, fpoly.deg(), gpoly.deg(), n)?;
        let cert = v.certificate(
            &digest_inputs(&[&fpoly.to_text(), &gpoly.to_text()]),
            serde_json::json!({
                "f": fpoly.to_text(), "g": gpoly.to_text(), "t": t, "n": n,
            }),
        );
        return report(common, &[cert]);
    }
    if !SUITES.contains(&suite) {
        // unknown suite is a usage error, not a rejected hypothesis
        eprintln!("unknown suite {suite:?}; expected one of: {}", SUITES.join(" "));
        return Ok(2);
    }
    let cfg = CampaignConfig {
        seed: common.seed,
        trials: common.trials,
        workers: common
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    let certs = run_suite(suite, &cfg)?;
    report(common, &certs)
}

fn aux_cert_json(cert: &AuxCertificate) -> serde_json::Value {
    serde_json::json!({
        "poly": cert.poly.to_text(),
        "degree": cert.degree,
        "height": cert.height.to_string(),
        "certificate": cert.verdict.certificate(
            &digest_inputs(&[&cert.poly.to_text()]),
            serde_json::json!({"degree": cert.degree, "height": cert.height.to_string()}),
        ),
    })
}

fn cmd_construct(spec_path: &PathBuf, common: &CommonFlags) -> Result<u8, GlError> {
    let text = io::read_to_string(spec_path)?;
    let specs: Vec<io::AuxSpecFile> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text)
            .map_err(|e| GlError::Parse(format!("{}: {e}", spec_path.display())))?
    } else {
        vec![serde_json::from_str(&text)
            .map_err(|e| GlError::Parse(format!("{}: {e}", spec_path.display())))?]
    };
    let cap = common
        .bits_cap
        .or_else(|| std::env::var(BITS_CAP_ENV).ok().and_then(|v| v.parse().ok()));
    let mut out = String::new();
    let mut worst = 0u8;
    for mut file in specs {
        if let Some(b) = common.bits.or(cap) {
            file.bits = Some(file.bits.unwrap_or(b));
        }
        let spec = file.to_spec()?;
        match construct_aux_poly(&spec) {
            Ok(cert) => {
                if cert.verdict.holds() {
                    out.push_str(&serde_json::to_string(&aux_cert_json(&cert))?);
                    out.push('\n');
                } else {
                    worst = worst.max(5);
                }
            }
            Err(GlError::NotFound(msg)) => {
                out.push_str(&serde_json::to_string(
                    &serde_json::json!({"n": file.n, "not_found": msg}),
                )?);
                out.push('\n');
                worst = worst.max(3);
            }
            Err(e) => return Err(e),
        }
    }
    emit(common, &out)?;
    Ok(worst)
}

fn cmd_pipeline(bundle_path: &PathBuf, common: &CommonFlags) -> Result<u8, GlError> {
    let b = io::read_pipeline_bundle(bundle_path)?;
    let p = &b.params;
    let one = num_rational::BigRational::one();
    let eps = p.epsilon.clone().unwrap_or_else(|| &one / num_rational::BigRational::from_integer(10.into()));
    let (s_text, trace_json) = match b.kind.as_str() {
        "propQ" => {
            let maps = b.maps.as_deref().ok_or_else(|| GlError::Parse("propQ needs maps".into()))?;
            let (q, bound, v) = run_prop_q(&b.poly, maps, &b.points, p.t, p.n)?;
            let (lo, hi) = io::interval_to_strings(&bound);
            let j = serde_json::json!({
                "holds": v.holds(),
                "stages": [{"stage": "propQ_product_bound", "lo": lo, "hi": hi,
                            "certificate": v.certificate(&digest_inputs(&[&q.to_text()]),
                                                          serde_json::json!({}))}],
            });
            if !v.holds() {
                return Err(GlError::Undecided(v.certificate("", serde_json::json!({})).precision_bits));
            }
            (q.to_text(), j)
        }
        "propR" => {
            let maps = b.maps.as_deref().ok_or_else(|| GlError::Parse("propR needs maps".into()))?;
            let (s, _xi, trace) =
                run_prop_r(&b.poly, maps, &b.points, p.s, p.t, p.n, &p.x, &p.kappa)?;
            let j = io::trace_to_json(&trace);
            if !trace.holds() {
                return Ok(5);
            }
            (s.to_text(), j)
        }
        "propRbis" => {
            let a = b.scales.as_ref().ok_or_else(|| GlError::Parse("propRbis needs scales".into()))?;
            let ell = p.ell.unwrap_or(0);
            let (s, trace) =
                run_prop_rbis(&b.poly, a, &b.points, p.t, ell, p.n, &p.x, &p.kappa, &eps)?;
            let j = io::trace_to_json(&trace);
            if !trace.holds() {
                return Ok(5);
            }
            (s.to_text(), j)
        }
        "propRter" => {
            let a = b.scales.as_ref().ok_or_else(|| GlError::Parse("propRter needs scales".into()))?;
            let (s, _xi, trace) = run_prop_rter(&b.poly, a, &b.points, p.n, &p.x, &p.kappa, &eps)?;
            let j = io::trace_to_json(&trace);
            if !trace.holds() {
                return Ok(5);
            }
            (s.to_text(), j)
        }
        other => return Err(GlError::Parse(format!("unknown pipeline kind {other:?}"))),
    };
    let mut doc = trace_json;
    doc["result_poly"] = serde_json::Value::String(s_text);
    emit(common, &format!("{}\n", serde_json::to_string(&doc)?))?;
    Ok(0)
}

fn cmd_zarankiewicz(m1: usize, n1: usize, m: usize, n: usize) -> Result<u8, GlError> {
    let k = match zarankiewicz_oracle(m1, n1, m, n) {
        Ok(k) => k,
        Err(e) => {
            eprintln!("{e}");
            return Ok(2);
        }
    };
    if m1 == 2 {
        let bound = 1 + n + (n1 - 1) * m * (m - 1) / 2;
        println!("{k} (bound {bound})");
    } else {
        println!("{k}");
    }
    Ok(0)
}

fn cmd_partition(
    e_path: &PathBuf,
    f_path: Option<&PathBuf>,
    ell: Option<usize>,
    common: &CommonFlags,
) -> Result<u8, GlError> {
    let e = io::read_lattice_set(e_path)?;
    let f = match f_path {
        Some(p) => io::read_lattice_set(p)?,
        None => gelfond_lab::combinatorics::orbit(&e),
    };
    let (cert, v) = match ell {
        Some(l) => partition_prop62(&e, &f, l)?,
        None => partition_prop61(&e, &f)?,
    };
    let revalidated = cert.validate(&e, &f);
    let v = Verdict::all("partition", &[v, revalidated]);
    let out = v.certificate(
        &digest_inputs(&[&format!("{e:?}"), &format!("{f:?}")]),
        serde_json::json!({"ell": ell, "E_size": e.len(), "F_size": f.len()}),
    );
    report(common, &[out])
}

fn cmd_gcd_translates(
    poly_path: &PathBuf,
    scales: &[String],
    ell: Option<usize>,
    common: &CommonFlags,
) -> Result<u8, GlError> {
    let p = io::read_poly(poly_path)?;
    let values: Result<Vec<_>, _> = scales.iter().map(|s| io::parse_number(s)).collect();
    let a = ScaleSet::new(values?)?;
    let q = gcd_translates(&p, &a)?;
    match ell {
        Some(l) => {
            let (vd, vh) = verify_thm_g(&p, &a, l)?;
            let v = Verdict::all("gcd_translates_bounds", &[vd, vh]);
            let cert = v.certificate(
                &digest_inputs(&[&p.to_text()]),
                serde_json::json!({"q": q.to_text(), "ell": l}),
            );
            report(common, &[cert])
        }
        None => {
            emit(common, &format!("{}\n", q.to_text()))?;
            Ok(0)
        }
    }
}

fn run(cli: Cli) -> Result<u8, GlError> {
    match &cli.cmd {
        Cmd::Verify { suite, common, points, f, g, t } => {
            cmd_verify(suite, common, points.as_ref(), f.as_ref(), g.as_ref(), *t)
        }
        Cmd::Construct { spec, common } => cmd_construct(spec, common),
        Cmd::Pipeline { bundle, common } => cmd_pipeline(bundle, common),
        Cmd::Zarankiewicz { m1, n1, m, n } => cmd_zarankiewicz(*m1, *n1, *m, *n),
        Cmd::Partition { e, f, ell, common } => cmd_partition(e, f.as_ref(), *ell, common),
        Cmd::GcdTranslates { poly, scales, ell, common } => {
            cmd_gcd_translates(poly, scales, ell.as_ref().copied(), common)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
