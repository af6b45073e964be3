//! Text and JSON formats: polynomial, point, map and lattice-set files,
//! exponent-table CSV, the auxiliary small-value spec, and pipeline
//! bundles. All parsers are bit-exact: rationals round-trip unchanged.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::auxpoly::SmallValueSpec;
use crate::combinatorics::{ExponentTable, LatticeSet};
use crate::error::GlError;
use crate::factorgcd::ScaleSet;
use crate::interval::{ComplexEnclosure, RealInterval};
use crate::pipelines::{PipelineParams, PipelineTrace};
use crate::poly::{parse_rational, EvalPointSet, RatPoly};
use crate::transforms::AffineMap;

pub fn read_to_string(path: &Path) -> Result<String, GlError> {
    std::fs::read_to_string(path).map_err(GlError::Io)
}

pub fn write_string(path: &Path, text: &str) -> Result<(), GlError> {
    std::fs::write(path, text).map_err(GlError::Io)
}

/// A number token: `p/q`, `p`, or a decimal string like `-1.25`.
pub fn parse_number(s: &str) -> Result<BigRational, GlError> {
    let s = s.trim();
    if s.contains('.') {
        ComplexEnclosure::rational_from_decimal(s)
    } else {
        parse_rational(s)
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// One line, coefficients low-to-high, each `p/q` or `p`.
pub fn parse_poly(text: &str) -> Result<RatPoly, GlError> {
    let line = data_lines(text)
        .next()
        .ok_or_else(|| GlError::Parse("empty polynomial file".into()))?;
    let p = RatPoly::from_text(line)?;
    if p.is_zero() {
        return Err(GlError::ZeroPolynomial);
    }
    Ok(p)
}

pub fn read_poly(path: &Path) -> Result<RatPoly, GlError> {
    parse_poly(&read_to_string(path)?)
}

pub fn write_poly(path: &Path, p: &RatPoly) -> Result<(), GlError> {
    write_string(path, &(p.to_text() + "\n"))
}

/// One complex point per line as `re im` (or just `re`), rational syntax;
/// a leading `#bits=N` directive switches to decimal strings carried at
/// that nominal precision. Decimal values are exact rationals either way.
pub fn parse_points(text: &str) -> Result<EvalPointSet, GlError> {
    let mut bits: Option<u32> = None;
    if let Some(first) = text.lines().next() {
        if let Some(rest) = first.trim().strip_prefix("#bits=") {
            bits = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| GlError::Parse(format!("bad precision directive: {first}")))?,
            );
        }
    }
    let mut points = Vec::new();
    for line in data_lines(text) {
        let mut it = line.split_whitespace();
        let re = parse_number(it.next().unwrap())?;
        let im = match it.next() {
            Some(tok) => parse_number(tok)?,
            None => BigRational::from_integer(0.into()),
        };
        if it.next().is_some() {
            return Err(GlError::Parse(format!("too many fields in point line: {line}")));
        }
        let mut z = ComplexEnclosure::from_rationals(re, im);
        if let Some(b) = bits {
            z.bits = b;
        }
        points.push(z);
    }
    EvalPointSet::new(points)
}

pub fn read_points(path: &Path) -> Result<EvalPointSet, GlError> {
    parse_points(&read_to_string(path)?)
}

/// One map per line: `a b` as two rationals.
pub fn parse_maps(text: &str) -> Result<Vec<AffineMap>, GlError> {
    let mut maps = Vec::new();
    for line in data_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(GlError::Parse(format!("map line needs `a b`: {line}")));
        }
        maps.push(AffineMap::new(parse_number(toks[0])?, parse_number(toks[1])?)?);
    }
    if maps.is_empty() {
        return Err(GlError::Parse("empty map file".into()));
    }
    Ok(maps)
}

pub fn read_maps(path: &Path) -> Result<Vec<AffineMap>, GlError> {
    parse_maps(&read_to_string(path)?)
}

/// First line `s`, then one point per line as space-separated integers.
pub fn parse_lattice_set(text: &str) -> Result<LatticeSet, GlError> {
    let mut lines = data_lines(text);
    let s: usize = lines
        .next()
        .ok_or_else(|| GlError::Parse("empty lattice-set file".into()))?
        .parse()
        .map_err(|_| GlError::Parse("first line must be the dimension s".into()))?;
    let mut points = Vec::new();
    for line in lines {
        let p: Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
        points.push(p.map_err(|_| GlError::Parse(format!("bad lattice point: {line}")))?);
    }
    LatticeSet::new(s, points)
}

pub fn read_lattice_set(path: &Path) -> Result<LatticeSet, GlError> {
    parse_lattice_set(&read_to_string(path)?)
}

pub fn lattice_set_to_text(set: &LatticeSet) -> String {
    let mut out = format!("{}\n", set.s);
    for p in set.iter() {
        let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// CSV with a header row of column labels and a label column; entries are
/// rationals. The kappa parameters live outside the table.
pub fn parse_exponent_table(
    text: &str,
    kappa1: BigRational,
    kappa2: BigRational,
) -> Result<ExponentTable, GlError> {
    let mut lines = data_lines(text);
    let header = lines.next().ok_or_else(|| GlError::Parse("empty CSV".into()))?;
    let col_labels: Vec<String> =
        header.split(',').skip(1).map(|s| s.trim().to_string()).collect();
    let mut row_labels = Vec::new();
    let mut entries = Vec::new();
    for line in lines {
        let mut cells = line.split(',');
        row_labels.push(
            cells
                .next()
                .ok_or_else(|| GlError::Parse(format!("bad CSV row: {line}")))?
                .trim()
                .to_string(),
        );
        let row: Result<Vec<BigRational>, GlError> = cells.map(parse_number).collect();
        entries.push(row?);
    }
    ExponentTable::new(row_labels, col_labels, entries, kappa1, kappa2)
}

pub fn exponent_table_to_csv(t: &ExponentTable) -> String {
    let mut out = String::new();
    out.push_str("phi,");
    out.push_str(&t.col_labels.join(","));
    out.push('\n');
    for (label, row) in t.row_labels.iter().zip(&t.entries) {
        out.push_str(label);
        for v in row {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// JSON shape of the auxiliary small-value spec: rationals and points as
/// strings (`p/q` or decimal).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuxSpecFile {
    pub n: usize,
    pub beta: String,
    pub sigma: Vec<String>,
    pub tau: String,
    pub nu: String,
    pub xi: Vec<String>,
    #[serde(default)]
    pub bits: Option<u32>,
}

impl AuxSpecFile {
    pub fn to_spec(&self) -> Result<SmallValueSpec, GlError> {
        let xis: Result<Vec<ComplexEnclosure>, GlError> = self
            .xi
            .iter()
            .map(|s| {
                let mut z = ComplexEnclosure::from_rational(parse_number(s)?);
                if let Some(b) = self.bits {
                    z.bits = b;
                }
                Ok(z)
            })
            .collect();
        SmallValueSpec::new(
            self.n,
            parse_number(&self.beta)?,
            self.sigma.iter().map(|s| parse_number(s)).collect::<Result<_, _>>()?,
            parse_number(&self.tau)?,
            parse_number(&self.nu)?,
            xis?,
        )
    }
}

pub fn read_aux_spec(path: &Path) -> Result<SmallValueSpec, GlError> {
    let file: AuxSpecFile = serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| GlError::Parse(format!("{}: {e}", path.display())))?;
    file.to_spec()
}

/// JSON bundle for the pipeline runners: file references plus parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineBundle {
    /// one of `propQ`, `propR`, `propRbis`, `propRter`
    pub kind: String,
    pub poly: String,
    #[serde(default)]
    pub maps: Option<String>,
    #[serde(default)]
    pub scales: Option<Vec<String>>,
    pub points: String,
    pub n: usize,
    #[serde(default)]
    pub s: Option<usize>,
    #[serde(default)]
    pub t: Option<usize>,
    #[serde(default)]
    pub ell: Option<usize>,
    #[serde(default)]
    pub x: Option<String>,
    #[serde(default)]
    pub kappa: Option<String>,
    #[serde(default)]
    pub epsilon: Option<String>,
}

/// The bundle with its references resolved relative to the bundle file.
pub struct ResolvedBundle {
    pub kind: String,
    pub poly: RatPoly,
    pub maps: Option<Vec<AffineMap>>,
    pub scales: Option<ScaleSet>,
    pub points: EvalPointSet,
    pub params: PipelineParams,
}

pub fn read_pipeline_bundle(path: &Path) -> Result<ResolvedBundle, GlError> {
    let bundle: PipelineBundle = serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| GlError::Parse(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let resolve = |p: &str| -> PathBuf { base.join(p) };
    let poly = read_poly(&resolve(&bundle.poly))?;
    let maps = bundle.maps.as_deref().map(|m| read_maps(&resolve(m))).transpose()?;
    let scales = bundle
        .scales
        .as_ref()
        .map(|v| {
            let parsed: Result<Vec<BigRational>, GlError> =
                v.iter().map(|s| parse_number(s)).collect();
            ScaleSet::new(parsed?)
        })
        .transpose()?;
    let points = read_points(&resolve(&bundle.points))?;
    let params = PipelineParams {
        n: bundle.n,
        s: bundle.s.unwrap_or(1),
        t: bundle.t.unwrap_or(1),
        ell: bundle.ell,
        x: bundle.x.as_deref().map(parse_number).transpose()?.unwrap_or_else(|| {
            BigRational::from_integer(2.into())
        }),
        kappa: bundle
            .kappa
            .as_deref()
            .map(parse_number)
            .transpose()?
            .unwrap_or_else(|| BigRational::from_integer(28.into())),
        epsilon: bundle.epsilon.as_deref().map(parse_number).transpose()?,
    };
    Ok(ResolvedBundle { kind: bundle.kind, poly, maps, scales, points, params })
}

/// Serialize a trace as an array of stage records with certificates.
pub fn trace_to_json(trace: &PipelineTrace) -> serde_json::Value {
    let stages: Vec<serde_json::Value> = trace
        .stages
        .iter()
        .map(|s| {
            let cert = s.verdict.certificate(&s.digest, serde_json::json!({"stage": s.stage}));
            serde_json::json!({
                "stage": s.stage,
                "digest": s.digest,
                "certificate": cert,
            })
        })
        .collect();
    serde_json::json!({
        "stages": stages,
        "holds": trace.holds(),
    })
}

/// Decimal rendering helper for reports.
pub fn interval_to_strings(iv: &RealInterval) -> (String, String) {
    (
        crate::interval::rational_to_decimal(&iv.lo, 30),
        crate::interval::rational_to_decimal(&iv.hi, 30),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};
    use num_traits::Zero;

    #[test]
    fn poly_roundtrip() {
        let p = RatPoly::from_coeffs(vec![rat(4), ratio(1, 3), rat(-2)]);
        let q = parse_poly(&p.to_text()).unwrap();
        assert_eq!(p, q);
        assert!(parse_poly("  \n").is_err());
    }

    #[test]
    fn point_file_rational_lines() {
        let e = parse_points("1/2 0\n-3 1/4\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.points[0].as_exact_rational().unwrap(), ratio(1, 2));
        assert_eq!(e.points[1].im.lo, ratio(1, 4));
    }

    #[test]
    fn point_file_decimal_directive() {
        let e = parse_points("#bits=256\n0.5\n1.25 -0.75\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e.points[0].bits, 256);
        assert_eq!(e.points[0].as_exact_rational().unwrap(), ratio(1, 2));
        assert_eq!(e.points[1].im.lo, ratio(-3, 4));
    }

    #[test]
    fn map_file() {
        let maps = parse_maps("2 0\n1/3 -5\n").unwrap();
        assert_eq!(maps.len(), 2);
        assert_eq!(*maps[0].scale(), rat(2));
        assert_eq!(*maps[1].shift(), rat(-5));
        assert!(parse_maps("2\n").is_err());
    }

    #[test]
    fn lattice_set_roundtrip() {
        let set = parse_lattice_set("2\n0 0\n1 2\n").unwrap();
        assert_eq!(set.len(), 2);
        let text = lattice_set_to_text(&set);
        let again = parse_lattice_set(&text).unwrap();
        assert_eq!(set, again);
    }

    #[test]
    fn exponent_table_csv_roundtrip() {
        let t = ExponentTable::new(
            vec!["2".into(), "3".into()],
            vec!["x1".into()],
            vec![vec![ratio(1, 2)], vec![rat(1)]],
            rat(2),
            rat(3),
        )
        .unwrap();
        let csv = exponent_table_to_csv(&t);
        let u = parse_exponent_table(&csv, rat(2), rat(3)).unwrap();
        assert_eq!(t.entries, u.entries);
        assert_eq!(t.row_labels, u.row_labels);
    }

    #[test]
    fn aux_spec_json() {
        let file: AuxSpecFile = serde_json::from_str(
            r#"{"n": 8, "beta": "2", "sigma": ["1/5"], "tau": "1/10",
                "nu": "6/5", "xi": ["1/3"], "bits": 512}"#,
        )
        .unwrap();
        let spec = file.to_spec().unwrap();
        assert_eq!(spec.n, 8);
        assert!(spec.feasible_regime);
        assert_eq!(spec.xis[0].bits, 512);
    }

    #[test]
    fn number_token_forms() {
        assert_eq!(parse_number("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse_number("7/2").unwrap(), ratio(7, 2));
        assert!(parse_number("x").is_err());
        assert!(parse_number("0").unwrap().is_zero());
    }
}
