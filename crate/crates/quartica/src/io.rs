//! Dataset and report serialization.
//!
//! A dataset carries a curve over a cyclotomic field, its named bitangent
//! lines, and optional explicit sections. The file format is JSON with every
//! field element written as an array of phi(n) rational strings in the basis
//! 1, zeta, ..., zeta^(phi(n)-1); rationals are stored reduced, so rendering
//! is canonical and load(save(x)) = x holds exactly.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::curve::{derive_section_with, BitangentLine, BitangentSection, QuarticCurve};
use crate::error::{Error, Result};
use crate::exactfield::{
    format_rational, parse_rational, CyclotomicField, FieldElement, Poly, SqrtOptions,
};

pub const DATASET_FORMAT: &str = "quartica-dataset";
pub const DATASET_VERSION: u64 = 1;
pub const REPORT_FORMAT: &str = "quartica-report";

/// One named line x = a t + b, optionally with an explicit section
/// y = c t^2 + d t + e.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetLine {
    pub name: String,
    pub a: FieldElement,
    pub b: FieldElement,
    pub section: Option<(FieldElement, FieldElement, FieldElement)>,
}

impl DatasetLine {
    pub fn line(&self) -> BitangentLine {
        BitangentLine::new(self.name.clone(), self.a.clone(), self.b.clone())
    }

    pub fn stored_section(&self) -> Option<BitangentSection> {
        self.section.as_ref().map(|(c, d, e)| BitangentSection {
            line: self.line(),
            c: c.clone(),
            d: d.clone(),
            e: e.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub field: Arc<CyclotomicField>,
    pub curve: QuarticCurve,
    pub lines: Vec<DatasetLine>,
    pub description: String,
    pub provenance: String,
}

impl Dataset {
    /// The section for one line: the stored one when present, derived
    /// otherwise.
    pub fn section_for(&self, index: usize) -> Result<BitangentSection> {
        self.section_for_with(index, &SqrtOptions::default())
    }

    pub fn section_for_with(&self, index: usize, opts: &SqrtOptions) -> Result<BitangentSection> {
        let entry = &self.lines[index];
        match entry.stored_section() {
            Some(s) => Ok(s),
            None => derive_section_with(&self.curve, &entry.line(), opts),
        }
    }

    pub fn sections(&self, indices: &[usize]) -> Result<Vec<BitangentSection>> {
        indices.iter().map(|&i| self.section_for(i)).collect()
    }

    /// Maps user-facing tokens to 0-based indices. A token that parses as an
    /// integer is a 1-based position; anything else must match a line name.
    /// Duplicates are rejected.
    pub fn resolve_indices(&self, tokens: &[String]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(tokens.len());
        for token in tokens {
            let token = token.trim();
            let index = if let Ok(pos) = token.parse::<usize>() {
                if pos == 0 || pos > self.lines.len() {
                    return Err(Error::InvalidInput(format!(
                        "position {pos} is outside 1..={}",
                        self.lines.len()
                    )));
                }
                pos - 1
            } else {
                match self.lines.iter().position(|l| l.name == token) {
                    Some(i) => i,
                    None => {
                        return Err(Error::InvalidInput(format!(
                            "no line named {token:?} in the dataset"
                        )))
                    }
                }
            };
            if out.contains(&index) {
                return Err(Error::InvalidInput(format!(
                    "line {:?} selected twice",
                    self.lines[index].name
                )));
            }
            out.push(index);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let lines: Vec<Value> = self
            .lines
            .iter()
            .map(|l| {
                let mut m = Map::new();
                m.insert("name".into(), Value::String(l.name.clone()));
                m.insert("a".into(), element_to_json(&l.a));
                m.insert("b".into(), element_to_json(&l.b));
                if let Some((c, d, e)) = &l.section {
                    m.insert(
                        "section".into(),
                        json!({
                            "c": element_to_json(c),
                            "d": element_to_json(d),
                            "e": element_to_json(e),
                        }),
                    );
                }
                Value::Object(m)
            })
            .collect();
        json!({
            "format": DATASET_FORMAT,
            "version": DATASET_VERSION,
            "field": self.field.order(),
            "description": self.description,
            "provenance": self.provenance,
            "curve": {
                "p": poly_to_json(self.curve.p()),
                "q": poly_to_json(self.curve.q()),
                "r": poly_to_json(self.curve.r()),
            },
            "lines": lines,
        })
    }

    /// Canonical text rendering; loads back to an equal dataset.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_json())
            .expect("dataset values contain no non-serializable parts");
        text.push('\n');
        text
    }

    /// Digest of the canonical rendering; reports cite it as the input hash.
    pub fn digest(&self) -> String {
        sha256_hex(self.render().as_bytes())
    }

    pub fn parse(text: &str) -> Result<Dataset> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
            path: "$".into(),
            message: format!("not valid JSON: {e}"),
        })?;
        Dataset::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Dataset> {
        let obj = as_object(value, "$")?;
        check_keys(
            obj,
            &[
                "format",
                "version",
                "field",
                "description",
                "provenance",
                "curve",
                "lines",
            ],
            "$",
        )?;
        let format = get_str(obj, "format", "$")?;
        if format != DATASET_FORMAT {
            return Err(schema("$.format", format!("expected {DATASET_FORMAT:?}, found {format:?}")));
        }
        let version = get_u64(obj, "version", "$")?;
        if version != DATASET_VERSION {
            return Err(schema("$.version", format!("unsupported version {version}")));
        }
        let order = get_u64(obj, "field", "$")?;
        let field = CyclotomicField::new(order)
            .map_err(|e| schema("$.field", format!("bad field order: {e}")))?;
        let description = match obj.get("description") {
            Some(v) => as_str(v, "$.description")?.to_string(),
            None => String::new(),
        };
        let provenance = match obj.get("provenance") {
            Some(v) => as_str(v, "$.provenance")?.to_string(),
            None => String::new(),
        };
        let curve_obj = as_object(
            obj.get("curve").ok_or_else(|| schema("$", "missing key \"curve\""))?,
            "$.curve",
        )?;
        check_keys(curve_obj, &["p", "q", "r"], "$.curve")?;
        let p = poly_from_json(&field, require(curve_obj, "p", "$.curve")?, "$.curve.p")?;
        let q = poly_from_json(&field, require(curve_obj, "q", "$.curve")?, "$.curve.q")?;
        let r = poly_from_json(&field, require(curve_obj, "r", "$.curve")?, "$.curve.r")?;
        let curve = QuarticCurve::new(&field, p, q, r)
            .map_err(|e| schema("$.curve", e.to_string()))?;
        let lines_value = obj
            .get("lines")
            .ok_or_else(|| schema("$", "missing key \"lines\""))?;
        let Value::Array(entries) = lines_value else {
            return Err(schema("$.lines", "expected an array"));
        };
        let mut lines = Vec::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            let path = format!("$.lines[{i}]");
            let line_obj = as_object(entry, &path)?;
            check_keys(line_obj, &["name", "a", "b", "section"], &path)?;
            let name = get_str(line_obj, "name", &path)?.to_string();
            if name.is_empty() {
                return Err(schema(format!("{path}.name"), "empty name"));
            }
            if lines.iter().any(|l: &DatasetLine| l.name == name) {
                return Err(schema(format!("{path}.name"), format!("duplicate name {name:?}")));
            }
            let a = element_from_json(&field, require(line_obj, "a", &path)?, &format!("{path}.a"))?;
            let b = element_from_json(&field, require(line_obj, "b", &path)?, &format!("{path}.b"))?;
            let section = match line_obj.get("section") {
                None => None,
                Some(sv) => {
                    let spath = format!("{path}.section");
                    let sobj = as_object(sv, &spath)?;
                    check_keys(sobj, &["c", "d", "e"], &spath)?;
                    let c = element_from_json(&field, require(sobj, "c", &spath)?, &format!("{spath}.c"))?;
                    let d = element_from_json(&field, require(sobj, "d", &spath)?, &format!("{spath}.d"))?;
                    let e = element_from_json(&field, require(sobj, "e", &spath)?, &format!("{spath}.e"))?;
                    Some((c, d, e))
                }
            };
            lines.push(DatasetLine { name, a, b, section });
        }
        Ok(Dataset {
            field,
            curve,
            lines,
            description,
            provenance,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Dataset> {
        let text = std::fs::read_to_string(path)?;
        Dataset::parse(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }
}

/// Machine-readable run summary: the command echo, the digest of the exact
/// input consumed, structured results, and any diagnostics. Rendering is
/// deterministic, so identical inputs give byte-identical reports.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub results: Value,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, input_digest: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            input_digest: input_digest.into(),
            results: Value::Object(Map::new()),
            diagnostics: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "format": REPORT_FORMAT,
            "version": DATASET_VERSION,
            "command": self.command,
            "input_digest": self.input_digest,
            "results": self.results,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_json())
            .expect("report values contain no non-serializable parts");
        text.push('\n');
        text
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.render())?;
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Report> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
            path: "$".into(),
            message: format!("not valid JSON: {e}"),
        })?;
        Report::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Report> {
        let obj = as_object(value, "$")?;
        check_keys(
            obj,
            &[
                "format",
                "version",
                "command",
                "input_digest",
                "results",
                "diagnostics",
            ],
            "$",
        )?;
        let format = get_str(obj, "format", "$")?;
        if format != REPORT_FORMAT {
            return Err(schema("$.format", format!("expected {REPORT_FORMAT:?}, found {format:?}")));
        }
        let version = get_u64(obj, "version", "$")?;
        if version != DATASET_VERSION {
            return Err(schema("$.version", format!("unsupported version {version}")));
        }
        let command = get_str(obj, "command", "$")?.to_string();
        let input_digest = get_str(obj, "input_digest", "$")?.to_string();
        let results = require(obj, "results", "$")?.clone();
        let Value::Array(items) = require(obj, "diagnostics", "$")? else {
            return Err(schema("$.diagnostics", "expected an array of strings"));
        };
        let mut diagnostics = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            diagnostics.push(as_str(item, &format!("$.diagnostics[{i}]"))?.to_string());
        }
        Ok(Report {
            command,
            input_digest,
            results,
            diagnostics,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Report> {
        let text = std::fs::read_to_string(path)?;
        Report::parse(&text)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn as_object<'v>(value: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| schema(path, "expected an object"))
}

fn as_str<'v>(value: &'v Value, path: &str) -> Result<&'v str> {
    value
        .as_str()
        .ok_or_else(|| schema(path, "expected a string"))
}

fn require<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing key {key:?}")))
}

fn get_str<'v>(obj: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v str> {
    as_str(require(obj, key, path)?, &format!("{path}.{key}"))
}

fn get_u64(obj: &Map<String, Value>, key: &str, path: &str) -> Result<u64> {
    require(obj, key, path)?
        .as_u64()
        .ok_or_else(|| schema(format!("{path}.{key}"), "expected a non-negative integer"))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(path, format!("unknown key {key:?}")));
        }
    }
    Ok(())
}

fn element_to_json(e: &FieldElement) -> Value {
    Value::Array(
        e.coords()
            .iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
    )
}

fn element_from_json(field: &Arc<CyclotomicField>, value: &Value, path: &str) -> Result<FieldElement> {
    let Value::Array(items) = value else {
        return Err(schema(path, "expected an array of rational strings"));
    };
    if items.len() != field.degree() {
        return Err(schema(
            path,
            format!("expected {} coordinates, found {}", field.degree(), items.len()),
        ));
    }
    let mut coords = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let s = as_str(item, &format!("{path}[{i}]"))?;
        let r = parse_rational(s).map_err(|m| schema(format!("{path}[{i}]"), m))?;
        coords.push(r);
    }
    field
        .from_coords(coords)
        .map_err(|e| schema(path, e.to_string()))
}

fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(element_to_json).collect())
}

fn poly_from_json(field: &Arc<CyclotomicField>, value: &Value, path: &str) -> Result<Poly> {
    let Value::Array(items) = value else {
        return Err(schema(path, "expected an array of field elements"));
    };
    let mut coeffs = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        coeffs.push(element_from_json(field, item, &format!("{path}[{i}]"))?);
    }
    Poly::new(field, coeffs).map_err(|e| schema(path, e.to_string()))
}

/// The built-in dataset: the curve x^3 + t^3 x + t over the 28th cyclotomic
/// field, its 28 bitangent lines in four families of seven, and explicit
/// sections for the seven distinguished lines L1..L7.
pub fn builtin_klein() -> Dataset {
    let f = CyclotomicField::new(28).expect("28 is a valid cyclotomic order");
    // zeta(k): the k-th power of the primitive 7th root; i: a square root
    // of -1; eps(k) = zeta(k) + zeta(-k), the real quadratic constants.
    let zeta = |k: i64| f.zeta_power(4 * k);
    let i = f.zeta_power(7);
    let eps = |k: i64| zeta(k) + zeta(-k);
    let curve = QuarticCurve::new(
        &f,
        Poly::zero(&f),
        Poly::monomial(f.one(), 3),
        Poly::monomial(f.one(), 1),
    )
    .expect("built-in curve coefficients are in range");

    let e1 = eps(1);
    let e2 = eps(2);
    let e3 = eps(4);
    let inv_sq = |e: &FieldElement| {
        e.square()
            .inv()
            .expect("eps constants are units")
    };
    // Family slopes a = -zeta^j * s_fam and intercepts b = -zeta^(3j) * t_fam.
    let fam_scale = [
        (f.one(), f.one()),
        (e1.square(), inv_sq(&e3)),
        (e2.square(), inv_sq(&e1)),
        (e3.square(), inv_sq(&e2)),
    ];
    let line = |fam: usize, j: i64| {
        let (s, t) = &fam_scale[fam];
        (
            -(zeta(j) * s.clone()),
            -(zeta(3 * j) * t.clone()),
        )
    };

    // Linear combinations sum(c * zeta(k)) for the section constants.
    let combo = |terms: &[(i64, i64)]| {
        let mut acc = f.zero();
        for &(c, k) in terms {
            acc = acc + f.from_integer(c) * zeta(k);
        }
        acc
    };
    let a1 = combo(&[(2, 5), (1, 4), (1, 3), (2, 2), (4, 0)]);
    let b1 = combo(&[(3, 5), (1, 4), (1, 3), (3, 2), (3, 0)]);
    let a3 = combo(&[(2, 5), (1, 4), (1, 1), (2, 0), (4, 6)]);
    let b3 = combo(&[(3, 4), (1, 3), (1, 0), (3, 6), (3, 5)]);
    let scaled = |s: FieldElement, u: FieldElement, v: FieldElement, w: FieldElement| {
        (s.clone() * u, s.clone() * v, s * w)
    };
    let sections = [
        scaled(i.clone(), f.one(), f.one(), f.one()),
        scaled(i.clone() * e1.clone(), f.one(), a1.clone(), b1.clone()),
        scaled(
            i.clone() * zeta(4) * e1.clone(),
            f.one(),
            zeta(2) * a1.clone(),
            zeta(4) * b1.clone(),
        ),
        scaled(i.clone() * zeta(5) * e3.clone(), f.one(), a3.clone(), b3.clone()),
        scaled(
            i.clone() * zeta(3) * e1.clone(),
            f.one(),
            zeta(5) * a1,
            zeta(3) * b1,
        ),
        scaled(
            i.clone() * zeta(2) * e3.clone(),
            f.one(),
            zeta(2) * a3,
            zeta(4) * b3,
        ),
        scaled(
            i * zeta(6) * e2,
            f.one(),
            combo(&[(1, 2), (2, 0), (2, 6), (1, 4), (4, 3)]),
            combo(&[(1, 5), (3, 3), (3, 2), (1, 0), (3, 6)]),
        ),
    ];

    // Seven distinguished lines first, then the rest in family-major order.
    let distinguished: [(usize, i64); 7] =
        [(0, 0), (1, 0), (1, 1), (3, 3), (1, 6), (3, 4), (2, 5)];
    let mut lines = Vec::with_capacity(28);
    for (idx, ((fam, j), section)) in distinguished.iter().zip(sections).enumerate() {
        let (a, b) = line(*fam, *j);
        lines.push(DatasetLine {
            name: format!("L{}", idx + 1),
            a,
            b,
            section: Some(section),
        });
    }
    for fam in 0..4usize {
        for j in 0..7i64 {
            if distinguished.contains(&(fam, j)) {
                continue;
            }
            let (a, b) = line(fam, j);
            lines.push(DatasetLine {
                name: format!("L{fam}_{j}"),
                a,
                b,
                section: None,
            });
        }
    }

    Dataset {
        field: f,
        curve,
        lines,
        description: "Klein quartic x^3 + t^3 x + t with its 28 bitangent lines; L1..L7 carry explicit sections".into(),
        provenance: "built-in".into(),
    }
}
