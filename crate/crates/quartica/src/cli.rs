//! Command-line surface: every operation reachable for batch use.
//!
//! Exit codes: 0 success, 1 domain errors (degenerate configurations, failed
//! reconstructions, identity violations), 2 usage and schema errors. Reports
//! are deterministic: identical inputs and flags give byte-identical output.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::curve::{curve_sanity, restrict, verify_bitangent, BitangentSection};
use crate::error::{Error, Result};
use crate::exactfield::SqrtOptions;
use crate::io::{builtin_klein, sha256_hex, Dataset, Report};
use crate::oracle::{connected_number_numeric, find_bitangents_numeric, OracleOptions};
use crate::pairing::{gram_matrix, SignMatrix};
use crate::topology::{
    classify_subsets, connected_number_det, connected_number_liftgraph, connected_number_triple,
    parity_identity_matrix, subarrangement_invariant_matrix,
};

#[derive(Parser)]
#[command(
    name = "quartica",
    version,
    about = "Exact arithmetic for bitangent arrangements of smooth plane quartics"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the built-in Klein dataset.
    Klein {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check every line of a dataset for bitangency and every stored
    /// section for the square identity.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Fill in the section of every line, writing the augmented dataset.
    DeriveSections {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Sign matrix of the selected sections.
    Gram {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        indices: IndicesArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Connected number of a triple by parity, determinant, and lift graph.
    Connected {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        indices: IndicesArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        /// Cross-check against the numeric oracle; disagreement is a hard
        /// error.
        #[arg(long)]
        oracle: bool,
    },
    /// Invariant pair (triples with connected number 1, with 2).
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        indices: IndicesArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Check the counting identity m(n-2) = 2M + count2 on a subset.
    Parity {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        indices: IndicesArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
    },
    /// Group all size-n subsets of the selection by invariant pair.
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        indices: IndicesArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        /// Subset size to enumerate.
        #[arg(long)]
        size: usize,
        /// Hard cap on the number of enumerated subsets.
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Numeric search for all lines with a perfect-square restriction.
    FindBitangents {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        /// Acceptance gate on the perfect-square defect.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        /// Newton starts per search round.
        #[arg(long, default_value_t = 200)]
        seeds: usize,
        /// RNG stream for the start points.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fail unless at least this many lines are found.
        #[arg(long)]
        expected: Option<usize>,
    },
    /// Connected number of the selection by the floating-point oracle.
    OracleConnected {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        format: FormatArgs,
        #[command(flatten)]
        indices: IndicesArgs,
        /// Sheet-matching gate at intersection points.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Dataset file; the built-in Klein dataset when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Destination file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FormatArgs {
    /// text: human-readable lines; structured: a JSON report.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Args)]
struct IndicesArgs {
    /// Comma-separated line names or 1-based positions; all lines when
    /// omitted.
    #[arg(long, value_delimiter = ',')]
    indices: Vec<String>,
}

#[derive(Args)]
struct PrecisionArgs {
    /// Working precision in bits for square-root reconstruction.
    #[arg(long, default_value_t = 256)]
    precision: u32,
}

impl PrecisionArgs {
    fn sqrt_options(&self) -> SqrtOptions {
        SqrtOptions {
            precision_bits: self.precision,
            ..SqrtOptions::default()
        }
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err((e, sink)) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            if code == 1 {
                if let Some((command, digest, output)) = sink {
                    let mut report = Report::new(command, digest);
                    report.diagnostics.push(e.to_string());
                    let _ = write_sink(&output, &report.render());
                }
            }
            code
        }
    }
}

/// Error plus enough context to emit a diagnostic report for domain errors.
type RunError = (Error, Option<(String, String, Option<PathBuf>)>);

struct Loaded {
    dataset: Dataset,
    digest: String,
}

fn load_input(input: &InputArgs) -> Result<Loaded> {
    match &input.input {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            let dataset = Dataset::parse(&text)?;
            Ok(Loaded {
                digest: sha256_hex(text.as_bytes()),
                dataset,
            })
        }
        None => {
            let dataset = builtin_klein();
            Ok(Loaded {
                digest: dataset.digest(),
                dataset,
            })
        }
    }
}

fn write_sink(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn resolve_selection(dataset: &Dataset, indices: &IndicesArgs) -> Result<Vec<usize>> {
    if indices.indices.is_empty() {
        Ok((0..dataset.lines.len()).collect())
    } else {
        dataset.resolve_indices(&indices.indices)
    }
}

fn names_of(dataset: &Dataset, selection: &[usize]) -> Vec<String> {
    selection
        .iter()
        .map(|&i| dataset.lines[i].name.clone())
        .collect()
}

fn sections_with(
    dataset: &Dataset,
    selection: &[usize],
    opts: &SqrtOptions,
) -> Result<Vec<BitangentSection>> {
    selection
        .iter()
        .map(|&i| dataset.section_for_with(i, opts))
        .collect()
}

fn matrix_compact(m: &SignMatrix) -> String {
    let rows: Vec<String> = m
        .entries()
        .iter()
        .map(|row| {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn matrix_json(m: &SignMatrix) -> Value {
    Value::Array(
        m.entries()
            .iter()
            .map(|row| Value::Array(row.iter().map(|&e| json!(e)).collect()))
            .collect(),
    )
}

fn emit(
    output: &Option<PathBuf>,
    format: OutputFormat,
    report: &Report,
    text: &str,
) -> Result<()> {
    match format {
        OutputFormat::Text => write_sink(output, text),
        OutputFormat::Structured => write_sink(output, &report.render()),
    }
}

fn execute(command: Command) -> std::result::Result<(), RunError> {
    match command {
        Command::Klein { output } => {
            let dataset = builtin_klein();
            write_sink(&output.output, &dataset.render()).map_err(|e| (e, None))
        }
        Command::Verify {
            input,
            output,
            format,
        } => {
            // verify writes its own report, failures included, so no
            // fallback diagnostic report on the error path.
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            run_verify(loaded, output, format).map_err(|e| (e, None))
        }
        Command::DeriveSections {
            input,
            output,
            precision,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = (
                "derive-sections".to_string(),
                loaded.digest.clone(),
                output.output.clone(),
            );
            run_derive_sections(loaded, output, precision).map_err(|e| (e, Some(ctx)))
        }
        Command::Gram {
            input,
            output,
            format,
            indices,
            precision,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = ("gram".to_string(), loaded.digest.clone(), output.output.clone());
            run_gram(loaded, output, format, indices, precision).map_err(|e| (e, Some(ctx)))
        }
        Command::Connected {
            input,
            output,
            format,
            indices,
            precision,
            oracle,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = (
                "connected".to_string(),
                loaded.digest.clone(),
                output.output.clone(),
            );
            run_connected(loaded, output, format, indices, precision, oracle)
                .map_err(|e| (e, Some(ctx)))
        }
        Command::Invariants {
            input,
            output,
            format,
            indices,
            precision,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = (
                "invariants".to_string(),
                loaded.digest.clone(),
                output.output.clone(),
            );
            run_invariants(loaded, output, format, indices, precision).map_err(|e| (e, Some(ctx)))
        }
        Command::Parity {
            input,
            output,
            format,
            indices,
            precision,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = ("parity".to_string(), loaded.digest.clone(), output.output.clone());
            run_parity(loaded, output, format, indices, precision).map_err(|e| (e, Some(ctx)))
        }
        Command::Classify {
            input,
            output,
            format,
            indices,
            precision,
            size,
            limit,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = (
                "classify".to_string(),
                loaded.digest.clone(),
                output.output.clone(),
            );
            run_classify(loaded, output, format, indices, precision, size, limit)
                .map_err(|e| (e, Some(ctx)))
        }
        Command::FindBitangents {
            input,
            output,
            format,
            tolerance,
            seeds,
            seed,
            expected,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = (
                "find-bitangents".to_string(),
                loaded.digest.clone(),
                output.output.clone(),
            );
            run_find_bitangents(loaded, output, format, tolerance, seeds, seed, expected)
                .map_err(|e| (e, Some(ctx)))
        }
        Command::OracleConnected {
            input,
            output,
            format,
            indices,
            tolerance,
        } => {
            let loaded = load_input(&input).map_err(|e| (e, None))?;
            let ctx = (
                "oracle-connected".to_string(),
                loaded.digest.clone(),
                output.output.clone(),
            );
            run_oracle_connected(loaded, output, format, indices, tolerance)
                .map_err(|e| (e, Some(ctx)))
        }
    }
}

fn run_verify(loaded: Loaded, output: OutputArgs, format: FormatArgs) -> Result<()> {
    let dataset = &loaded.dataset;
    let lines: Vec<_> = dataset.lines.iter().map(|l| l.line()).collect();
    let mut line_results = Vec::new();
    let mut failures = Vec::new();
    let mut first_error: Option<Error> = None;
    for entry in &dataset.lines {
        let ok = verify_bitangent(&dataset.curve, &entry.line());
        if !ok {
            failures.push(format!("{} is not a bitangent", entry.name));
            first_error.get_or_insert(Error::NotABitangent {
                name: entry.name.clone(),
            });
        }
        let section_ok = match entry.stored_section() {
            None => None,
            Some(section) => {
                let y = section.y_poly();
                let ok = match (y.checked_mul(&y), restrict(&dataset.curve, &section.line)) {
                    (Ok(square), Ok(restriction)) => square == restriction,
                    _ => false,
                };
                if !ok {
                    failures.push(format!("section of {} fails y^2 = F|_L", entry.name));
                    first_error.get_or_insert(Error::IdentityViolated(format!(
                        "section of {} fails y^2 = F|_L",
                        entry.name
                    )));
                }
                Some(ok)
            }
        };
        let mut obj = json!({ "name": entry.name, "bitangent": ok });
        if let Some(s) = section_ok {
            obj["section_verified"] = json!(s);
        }
        line_results.push(obj);
    }
    let sanity = curve_sanity(&dataset.curve, &lines);
    let name = |i: usize| dataset.lines[i].name.clone();
    for &(i, j) in &sanity.identical {
        failures.push(format!("{} and {} are the same line", name(i), name(j)));
        first_error.get_or_insert(Error::DuplicateLine {
            i: name(i),
            j: name(j),
        });
    }
    for &(i, j) in &sanity.on_curve {
        failures.push(format!(
            "{} and {} meet on the curve",
            name(i),
            name(j)
        ));
        first_error.get_or_insert(Error::OnBranchLocus {
            i: name(i),
            j: name(j),
        });
    }
    let concurrent: Vec<Value> = sanity
        .concurrent
        .iter()
        .map(|&(i, j, k)| json!([name(i), name(j), name(k)]))
        .collect();

    let mut report = Report::new("verify", loaded.digest);
    report.results = json!({
        "lines": line_results,
        "all_bitangent": failures.is_empty(),
        "concurrent_triples": concurrent,
    });
    report.diagnostics = failures.clone();

    let mut text = String::new();
    let checked = dataset
        .lines
        .iter()
        .filter(|l| l.section.is_some())
        .count();
    if failures.is_empty() {
        text.push_str(&format!(
            "{} lines: all bitangent\n{} stored sections: all verified\n",
            dataset.lines.len(),
            checked
        ));
    } else {
        for f in &failures {
            text.push_str(&format!("FAIL {f}\n"));
        }
    }
    text.push_str(&format!(
        "concurrent triples: {}\n",
        sanity.concurrent.len()
    ));
    emit(&output.output, format.format, &report, &text)?;
    match first_error {
        None => Ok(()),
        Some(e) => Err(e),
    }
}

fn run_derive_sections(
    loaded: Loaded,
    output: OutputArgs,
    precision: PrecisionArgs,
) -> Result<()> {
    let mut dataset = loaded.dataset;
    let opts = precision.sqrt_options();
    for i in 0..dataset.lines.len() {
        if dataset.lines[i].section.is_none() {
            let section = dataset.section_for_with(i, &opts)?;
            dataset.lines[i].section = Some((section.c, section.d, section.e));
        }
    }
    write_sink(&output.output, &dataset.render())
}

fn run_gram(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    indices: IndicesArgs,
    precision: PrecisionArgs,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let selection = resolve_selection(dataset, &indices)?;
    let sections = sections_with(dataset, &selection, &precision.sqrt_options())?;
    let matrix = gram_matrix(&sections)?;
    let names = names_of(dataset, &selection);
    let mut report = Report::new(
        format!("gram --indices {}", names.join(",")),
        loaded.digest.clone(),
    );
    report.results = json!({
        "indices": names,
        "matrix": matrix_json(&matrix),
    });
    let text = format!("{}\n", matrix_compact(&matrix));
    emit(&output.output, format.format, &report, &text)
}

fn run_connected(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    indices: IndicesArgs,
    precision: PrecisionArgs,
    oracle: bool,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let selection = resolve_selection(dataset, &indices)?;
    if selection.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "connected needs exactly three lines, got {}",
            selection.len()
        )));
    }
    let sections = sections_with(dataset, &selection, &precision.sqrt_options())?;
    let matrix = gram_matrix(&sections)?;
    let by_parity = connected_number_triple(&matrix)?;
    let by_det = connected_number_det(&matrix)?;
    let by_lift = connected_number_liftgraph(&sections)?;
    if usize::from(by_parity) != by_lift || by_parity != by_det {
        return Err(Error::IdentityViolated(format!(
            "methods disagree: parity {by_parity}, determinant {by_det}, lift graph {by_lift}"
        )));
    }
    let names = names_of(dataset, &selection);
    let mut methods = serde_json::Map::new();
    methods.insert("parity".into(), json!(by_parity));
    methods.insert("determinant".into(), json!(by_det));
    methods.insert("lift_graph".into(), json!(by_lift));
    let mut text = format!("connected number: {by_parity}\n");
    if oracle {
        let lines: Vec<_> = selection
            .iter()
            .map(|&i| dataset.lines[i].line())
            .collect();
        let numeric = connected_number_numeric(
            &dataset.curve,
            &lines,
            1,
            &OracleOptions::default(),
        )?;
        if numeric != usize::from(by_parity) {
            return Err(Error::IdentityViolated(format!(
                "numeric oracle found {numeric}, exact methods found {by_parity}"
            )));
        }
        methods.insert("oracle".into(), json!(numeric));
        text.push_str(&format!("oracle agrees: {numeric}\n"));
    }
    let mut report = Report::new(
        format!(
            "connected --indices {}{}",
            names.join(","),
            if oracle { " --oracle" } else { "" }
        ),
        loaded.digest.clone(),
    );
    report.results = json!({
        "indices": names,
        "connected_number": by_parity,
        "methods": Value::Object(methods),
    });
    emit(&output.output, format.format, &report, &text)
}

fn run_invariants(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    indices: IndicesArgs,
    precision: PrecisionArgs,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let selection = resolve_selection(dataset, &indices)?;
    let sections = sections_with(dataset, &selection, &precision.sqrt_options())?;
    let matrix = gram_matrix(&sections)?;
    let pair = subarrangement_invariant_matrix(&matrix)?;
    let names = names_of(dataset, &selection);
    let mut report = Report::new(
        format!("invariants --indices {}", names.join(",")),
        loaded.digest.clone(),
    );
    report.results = json!({
        "indices": names,
        "count1": pair.count1,
        "count2": pair.count2,
    });
    let text = format!("{pair}\n");
    emit(&output.output, format.format, &report, &text)
}

fn run_parity(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    indices: IndicesArgs,
    precision: PrecisionArgs,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let selection = resolve_selection(dataset, &indices)?;
    let sections = sections_with(dataset, &selection, &precision.sqrt_options())?;
    let matrix = gram_matrix(&sections)?;
    let parity = parity_identity_matrix(&matrix)?;
    let names = names_of(dataset, &selection);
    let lhs = parity.m * (parity.n - 2);
    let rhs = 2 * parity.heavy_triples + parity.count2;
    let mut report = Report::new(
        format!("parity --indices {}", names.join(",")),
        loaded.digest.clone(),
    );
    report.results = json!({
        "indices": names,
        "n": parity.n,
        "m": parity.m,
        "heavy_triples": parity.heavy_triples,
        "count2": parity.count2,
        "lhs": lhs,
        "rhs": rhs,
    });
    let text = format!(
        "m(n-2) = 2M + count2: {}*{} = 2*{} + {} = {}\n",
        parity.m,
        parity.n - 2,
        parity.heavy_triples,
        parity.count2,
        lhs
    );
    emit(&output.output, format.format, &report, &text)
}

fn run_classify(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    indices: IndicesArgs,
    precision: PrecisionArgs,
    size: usize,
    limit: u64,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let selection = resolve_selection(dataset, &indices)?;
    let sections = sections_with(dataset, &selection, &precision.sqrt_options())?;
    let classification = classify_subsets(&sections, size, limit)?;
    let names = names_of(dataset, &selection);
    // Subset entries index into the selection; translate to line names.
    let subset_names = |subset: &[usize]| -> Vec<String> {
        subset.iter().map(|&i| names[i].clone()).collect()
    };
    let classes: Vec<Value> = classification
        .classes
        .iter()
        .map(|(pair, subsets)| {
            json!({
                "count1": pair.count1,
                "count2": pair.count2,
                "subsets": subsets.iter().map(|s| json!(subset_names(s))).collect::<Vec<_>>(),
            })
        })
        .collect();
    let skipped: Vec<Value> = classification
        .skipped
        .iter()
        .map(|(subset, reason)| json!({ "subset": subset_names(subset), "reason": reason }))
        .collect();
    let mut report = Report::new(
        format!(
            "classify --indices {} --size {size} --limit {limit}",
            names.join(",")
        ),
        loaded.digest.clone(),
    );
    report.results = json!({
        "size": size,
        "classes": classes,
        "skipped": skipped,
    });
    let mut text = String::new();
    for (pair, subsets) in &classification.classes {
        text.push_str(&format!(
            "{pair}: {} subset{}\n",
            subsets.len(),
            if subsets.len() == 1 { "" } else { "s" }
        ));
    }
    text.push_str(&format!(
        "classes: {}; skipped: {}\n",
        classification.classes.len(),
        classification.skipped.len()
    ));
    emit(&output.output, format.format, &report, &text)
}

fn run_find_bitangents(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    tolerance: f64,
    seeds: usize,
    seed: u64,
    expected: Option<usize>,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let opts = OracleOptions {
        seeds,
        residual_tol: tolerance,
        seed,
        expected,
        ..OracleOptions::default()
    };
    let lines = find_bitangents_numeric(&dataset.curve, 1, &opts)?;
    let entries: Vec<Value> = lines
        .iter()
        .map(|l| {
            json!({
                "a": [l.a.re, l.a.im],
                "b": [l.b.re, l.b.im],
                "residual": l.residual,
            })
        })
        .collect();
    let mut command = format!("find-bitangents --tolerance {tolerance} --seeds {seeds} --seed {seed}");
    if let Some(e) = expected {
        command.push_str(&format!(" --expected {e}"));
    }
    let mut report = Report::new(command, loaded.digest.clone());
    report.results = json!({
        "count": lines.len(),
        "lines": entries,
    });
    let mut text = format!("found {} lines\n", lines.len());
    for l in &lines {
        text.push_str(&format!(
            "a=({:.6},{:.6}) b=({:.6},{:.6}) residual={:.3e}\n",
            l.a.re, l.a.im, l.b.re, l.b.im, l.residual
        ));
    }
    emit(&output.output, format.format, &report, &text)
}

fn run_oracle_connected(
    loaded: Loaded,
    output: OutputArgs,
    format: FormatArgs,
    indices: IndicesArgs,
    tolerance: f64,
) -> Result<()> {
    let dataset = &loaded.dataset;
    let selection = resolve_selection(dataset, &indices)?;
    let lines: Vec<_> = selection
        .iter()
        .map(|&i| dataset.lines[i].line())
        .collect();
    let opts = OracleOptions {
        match_tol: tolerance,
        ..OracleOptions::default()
    };
    let connected = connected_number_numeric(&dataset.curve, &lines, 1, &opts)?;
    let names = names_of(dataset, &selection);
    let mut report = Report::new(
        format!("oracle-connected --indices {}", names.join(",")),
        loaded.digest.clone(),
    );
    report.results = json!({
        "indices": names,
        "connected_number": connected,
    });
    let text = format!("connected number: {connected}\n");
    emit(&output.output, format.format, &report, &text)
}
