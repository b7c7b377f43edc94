//! File formats and argument parsing: the JSON matrix container, the
//! region-scan CSV, rational scalars, and `family:args` state specifiers.

use gme_core::hermitian::ComplexMatrix;
use gme_core::multipartite::SpaceShape;
use gme_core::states;
use gme_core::C64;
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::Path;

/// Anything that can go wrong reading arguments or files; the message is
/// meant to be printed verbatim.
#[derive(Debug)]
pub struct IoError(pub String);

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IoError {}

impl From<gme_core::Error> for IoError {
    fn from(e: gme_core::Error) -> Self {
        IoError(e.to_string())
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;

fn fail<T>(msg: impl Into<String>) -> IoResult<T> {
    Err(IoError(msg.into()))
}

// ---------------------------------------------------------------------
// JSON matrix container

#[derive(Deserialize)]
struct MatrixFile {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Serialize a matrix with its party dimensions. Numbers are written with
/// 17 significant digits so that parsing returns the identical f64.
pub fn matrix_to_json(dims: &[usize], m: &ComplexMatrix) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"dims\": [");
    for (k, d) in dims.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{d}");
    }
    out.push_str("],\n  \"matrix\": [\n");
    for i in 0..m.dim() {
        out.push_str("    [");
        for j in 0..m.dim() {
            if j > 0 {
                out.push_str(", ");
            }
            let z = m.get(i, j);
            let _ = write!(out, "[{:.16e}, {:.16e}]", z.re, z.im);
        }
        out.push(']');
        out.push_str(if i + 1 < m.dim() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn write_matrix(path: &Path, dims: &[usize], m: &ComplexMatrix) -> IoResult<()> {
    std::fs::write(path, matrix_to_json(dims, m))
        .map_err(|e| IoError(format!("cannot write {}: {e}", path.display())))
}

/// Parse the JSON matrix container and validate its shape.
pub fn read_matrix(path: &Path) -> IoResult<(Vec<usize>, ComplexMatrix)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| IoError(format!("cannot read {}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| IoError(format!("{}: malformed JSON: {e}", path.display())))?;
    if file.dims.is_empty() || file.dims.iter().any(|&d| d < 2) {
        return fail(format!("{}: dims must all be at least 2", path.display()));
    }
    let total: usize = file.dims.iter().product();
    if file.matrix.len() != total {
        return fail(format!(
            "{}: expected {total} rows for dims {:?}, found {}",
            path.display(),
            file.dims,
            file.matrix.len()
        ));
    }
    let mut m = ComplexMatrix::zeros(total);
    for (i, row) in file.matrix.iter().enumerate() {
        if row.len() != total {
            return fail(format!(
                "{}: row {i} has {} entries, expected {total}",
                path.display(),
                row.len()
            ));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return fail(format!("{}: non-finite entry at row {i}, column {j}", path.display()));
            }
            m.set(i, j, C64::new(re, im));
        }
    }
    Ok((file.dims, m))
}

/// Read a matrix that must be Hermitian (a state or a witness); the
/// offending entry pair is reported otherwise.
pub fn read_hermitian(path: &Path) -> IoResult<(Vec<usize>, ComplexMatrix)> {
    let (dims, m) = read_matrix(path)?;
    let scale = m.max_abs().max(1.0);
    for i in 0..m.dim() {
        for j in i..m.dim() {
            let diff = (m.get(i, j) - m.get(j, i).conj()).norm();
            if diff > 1e-10 * scale {
                return fail(format!(
                    "{}: not Hermitian: entries ({i},{j}) = {} and ({j},{i}) = {} disagree by {diff:.3e}",
                    path.display(),
                    m.get(i, j),
                    m.get(j, i)
                ));
            }
        }
    }
    Ok((dims, m))
}

// ---------------------------------------------------------------------
// Scalars and state specifiers

/// Parse a float or a rational literal like `9/179` (kept exact to the
/// last bit, unlike its decimal truncation).
pub fn parse_scalar(s: &str) -> IoResult<f64> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| IoError(format!("bad rational numerator in '{s}'")))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| IoError(format!("bad rational denominator in '{s}'")))?;
        if d == 0.0 {
            return fail(format!("zero denominator in '{s}'"));
        }
        return Ok(n / d);
    }
    s.parse().map_err(|_| IoError(format!("cannot parse number '{s}'")))
}

fn parse_usize(s: &str, what: &str) -> IoResult<usize> {
    s.trim().parse().map_err(|_| IoError(format!("bad {what} '{s}'")))
}

/// A state plus the party structure it lives on.
pub struct PreparedState {
    pub shape: SpaceShape,
    pub rho: ComplexMatrix,
}

/// Build a state from a `family:args` specifier, or load it from a JSON
/// file when the argument names an existing file.
///
/// Families: `ghz:n,d` (the projector), `rho-lambda:λ`, `noise:p,λ`,
/// `two-param:p,q`. Scalar arguments accept rational literals.
pub fn parse_state(spec: &str) -> IoResult<PreparedState> {
    if Path::new(spec).is_file() {
        let (dims, rho) = read_hermitian(Path::new(spec))?;
        let shape = SpaceShape::new(dims)?;
        return Ok(PreparedState { shape, rho });
    }
    let (family, args) = spec
        .split_once(':')
        .ok_or_else(|| IoError(format!("state '{spec}' is neither a file nor a family:args specifier")))?;
    let parts: Vec<&str> = args.split(',').collect();
    match (family, parts.as_slice()) {
        ("ghz", [n, d]) => {
            let n = parse_usize(n, "party count")?;
            let d = parse_usize(d, "local dimension")?;
            let shape = SpaceShape::uniform(n, d)?;
            let rho = ComplexMatrix::outer(&states::ghz(n, d)?);
            Ok(PreparedState { shape, rho })
        }
        ("rho-lambda", [lambda]) => {
            let rho = states::rho_lambda(parse_scalar(lambda)?)?;
            Ok(PreparedState { shape: SpaceShape::uniform(3, 3)?, rho })
        }
        ("noise", [p, lambda]) => {
            let base = states::rho_lambda(parse_scalar(lambda)?)?;
            let rho = states::add_white_noise(&base, parse_scalar(p)?)?;
            Ok(PreparedState { shape: SpaceShape::uniform(3, 3)?, rho })
        }
        ("two-param", [p, q]) => {
            let rho = states::two_param_family(parse_scalar(p)?, parse_scalar(q)?)?;
            Ok(PreparedState { shape: SpaceShape::uniform(3, 3)?, rho })
        }
        _ => fail(format!(
            "unknown state '{spec}'; expected ghz:n,d | rho-lambda:λ | noise:p,λ | two-param:p,q or a JSON file"
        )),
    }
}

// ---------------------------------------------------------------------
// Region-scan CSV

/// Which witness (if any) detects at a grid point. `Skip` marks points
/// outside the p + q ≤ 1 simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionVerdict {
    None,
    Ppt,
    Choi,
    Both,
    Skip,
}

impl RegionVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionVerdict::None => "NONE",
            RegionVerdict::Ppt => "PPT",
            RegionVerdict::Choi => "CHOI",
            RegionVerdict::Both => "BOTH",
            RegionVerdict::Skip => "SKIP",
        }
    }

    pub fn from_str(s: &str) -> IoResult<Self> {
        match s {
            "NONE" => Ok(RegionVerdict::None),
            "PPT" => Ok(RegionVerdict::Ppt),
            "CHOI" => Ok(RegionVerdict::Choi),
            "BOTH" => Ok(RegionVerdict::Both),
            "SKIP" => Ok(RegionVerdict::Skip),
            _ => fail(format!("unknown verdict '{s}'")),
        }
    }
}

/// One row of the two-map region scan. Values are absent on skipped rows.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionScanRow {
    pub p: f64,
    pub q: f64,
    pub value_ppt: Option<f64>,
    pub value_choi: Option<f64>,
    pub verdict: RegionVerdict,
}

pub const REGION_CSV_HEADER: &str = "p,q,value_ppt,value_choi,verdict";

fn csv_num(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

pub fn emit_region_csv(rows: &[RegionScanRow]) -> String {
    let mut out = String::from(REGION_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{:.16e},{:.16e},{},{},{}",
            r.p,
            r.q,
            csv_num(r.value_ppt),
            csv_num(r.value_choi),
            r.verdict.as_str()
        );
    }
    out
}

pub fn parse_region_csv(text: &str) -> IoResult<Vec<RegionScanRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == REGION_CSV_HEADER => {}
        other => return fail(format!("bad CSV header: {other:?}")),
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return fail(format!("line {}: expected 5 fields, found {}", k + 2, fields.len()));
        }
        let num = |s: &str, what: &str| -> IoResult<f64> {
            s.parse().map_err(|_| IoError(format!("line {}: bad {what} '{s}'", k + 2)))
        };
        let opt = |s: &str, what: &str| -> IoResult<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s, what).map(Some)
            }
        };
        rows.push(RegionScanRow {
            p: num(fields[0], "p")?,
            q: num(fields[1], "q")?,
            value_ppt: opt(fields[2], "value_ppt")?,
            value_choi: opt(fields[3], "value_choi")?,
            verdict: RegionVerdict::from_str(fields[4])?,
        });
    }
    Ok(rows)
}
