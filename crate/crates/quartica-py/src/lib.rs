//! Python bindings: the dataset operations and invariants as plain
//! functions. Datasets travel as canonical JSON text; `dataset=None` means
//! the built-in Klein arrangement.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use quartica::curve::{restrict, verify_bitangent, BitangentSection};
use quartica::error::Error;
use quartica::exactfield::SqrtOptions;
use quartica::io::{builtin_klein, Dataset};
use quartica::oracle::{connected_number_numeric, find_bitangents_numeric, OracleOptions};
use quartica::pairing::gram_matrix;
use quartica::topology::{
    classify_subsets, connected_number_det, connected_number_liftgraph, connected_number_triple,
    parity_identity_matrix, subarrangement_invariant_matrix,
};

fn pyerr(e: Error) -> PyErr {
    match e {
        Error::Io(inner) => PyIOError::new_err(inner.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn dataset_from(text: Option<&str>) -> PyResult<Dataset> {
    match text {
        None => Ok(builtin_klein()),
        Some(t) => Dataset::parse(t).map_err(pyerr),
    }
}

fn selection_of(ds: &Dataset, indices: Option<Vec<String>>) -> PyResult<Vec<usize>> {
    match indices {
        None => Ok((0..ds.lines.len()).collect()),
        Some(tokens) => ds.resolve_indices(&tokens).map_err(pyerr),
    }
}

fn sections_of(
    ds: &Dataset,
    selection: &[usize],
    precision: u32,
) -> PyResult<Vec<BitangentSection>> {
    let opts = SqrtOptions {
        precision_bits: precision,
        ..SqrtOptions::default()
    };
    selection
        .iter()
        .map(|&i| ds.section_for_with(i, &opts).map_err(pyerr))
        .collect()
}

/// Canonical text of the built-in Klein dataset.
#[pyfunction]
fn klein_dataset() -> String {
    builtin_klein().render()
}

/// Parses dataset text and returns its canonical rendering.
#[pyfunction]
fn load_dataset(text: &str) -> PyResult<String> {
    Ok(Dataset::parse(text).map_err(pyerr)?.render())
}

/// Line names in dataset order.
#[pyfunction]
#[pyo3(signature = (dataset=None))]
fn line_names(dataset: Option<&str>) -> PyResult<Vec<String>> {
    let ds = dataset_from(dataset)?;
    Ok(ds.lines.iter().map(|l| l.name.clone()).collect())
}

/// (all_ok, failure messages, concurrent triple count).
#[pyfunction]
#[pyo3(signature = (dataset=None))]
fn verify(dataset: Option<&str>) -> PyResult<(bool, Vec<String>, usize)> {
    let ds = dataset_from(dataset)?;
    let mut failures = Vec::new();
    for entry in &ds.lines {
        if !verify_bitangent(&ds.curve, &entry.line()) {
            failures.push(format!("{} is not a bitangent", entry.name));
        }
        if let Some(section) = entry.stored_section() {
            let y = section.y_poly();
            let ok = match (y.checked_mul(&y), restrict(&ds.curve, &section.line)) {
                (Ok(square), Ok(restriction)) => square == restriction,
                _ => false,
            };
            if !ok {
                failures.push(format!("section of {} fails y^2 = F|_L", entry.name));
            }
        }
    }
    let lines: Vec<_> = ds.lines.iter().map(|l| l.line()).collect();
    let sanity = quartica::curve::curve_sanity(&ds.curve, &lines);
    for &(i, j) in &sanity.identical {
        failures.push(format!(
            "{} and {} are the same line",
            ds.lines[i].name, ds.lines[j].name
        ));
    }
    for &(i, j) in &sanity.on_curve {
        failures.push(format!(
            "{} and {} meet on the curve",
            ds.lines[i].name, ds.lines[j].name
        ));
    }
    Ok((failures.is_empty(), failures, sanity.concurrent.len()))
}

/// Dataset text with every line's section filled in.
#[pyfunction]
#[pyo3(signature = (dataset=None, precision=256))]
fn derive_sections(dataset: Option<&str>, precision: u32) -> PyResult<String> {
    let mut ds = dataset_from(dataset)?;
    let opts = SqrtOptions {
        precision_bits: precision,
        ..SqrtOptions::default()
    };
    for i in 0..ds.lines.len() {
        if ds.lines[i].section.is_none() {
            let section = ds.section_for_with(i, &opts).map_err(pyerr)?;
            ds.lines[i].section = Some((section.c, section.d, section.e));
        }
    }
    Ok(ds.render())
}

/// Sign matrix rows for the selected lines.
#[pyfunction]
#[pyo3(signature = (dataset=None, indices=None, precision=256))]
fn gram(
    dataset: Option<&str>,
    indices: Option<Vec<String>>,
    precision: u32,
) -> PyResult<Vec<Vec<i8>>> {
    let ds = dataset_from(dataset)?;
    let selection = selection_of(&ds, indices)?;
    let sections = sections_of(&ds, &selection, precision)?;
    let matrix = gram_matrix(&sections).map_err(pyerr)?;
    Ok(matrix.entries().to_vec())
}

/// Connected number of a triple; parity, determinant, and lift-graph rules
/// are all evaluated and must agree.
#[pyfunction]
#[pyo3(signature = (dataset=None, indices=None, precision=256))]
fn connected(
    dataset: Option<&str>,
    indices: Option<Vec<String>>,
    precision: u32,
) -> PyResult<usize> {
    let ds = dataset_from(dataset)?;
    let selection = selection_of(&ds, indices)?;
    if selection.len() != 3 {
        return Err(PyValueError::new_err(format!(
            "connected needs exactly three lines, got {}",
            selection.len()
        )));
    }
    let sections = sections_of(&ds, &selection, precision)?;
    let g = gram_matrix(&sections).map_err(pyerr)?;
    let by_parity = connected_number_triple(&g).map_err(pyerr)?;
    let by_det = connected_number_det(&g).map_err(pyerr)?;
    let by_lift = connected_number_liftgraph(&sections).map_err(pyerr)?;
    if by_parity != by_det || usize::from(by_parity) != by_lift {
        return Err(PyValueError::new_err(format!(
            "methods disagree: parity {by_parity}, determinant {by_det}, lift graph {by_lift}"
        )));
    }
    Ok(by_lift)
}

/// (triples with connected number 1, triples with 2).
#[pyfunction]
#[pyo3(signature = (dataset=None, indices=None, precision=256))]
fn invariant_pair(
    dataset: Option<&str>,
    indices: Option<Vec<String>>,
    precision: u32,
) -> PyResult<(usize, usize)> {
    let ds = dataset_from(dataset)?;
    let selection = selection_of(&ds, indices)?;
    let sections = sections_of(&ds, &selection, precision)?;
    let g = gram_matrix(&sections).map_err(pyerr)?;
    let pair = subarrangement_invariant_matrix(&g).map_err(pyerr)?;
    Ok((pair.count1, pair.count2))
}

/// (n, minus count m, heavy triples M, count2); the identity
/// m(n-2) = 2M + count2 is checked internally.
#[pyfunction]
#[pyo3(signature = (dataset=None, indices=None, precision=256))]
fn parity(
    dataset: Option<&str>,
    indices: Option<Vec<String>>,
    precision: u32,
) -> PyResult<(usize, usize, usize, usize)> {
    let ds = dataset_from(dataset)?;
    let selection = selection_of(&ds, indices)?;
    let sections = sections_of(&ds, &selection, precision)?;
    let g = gram_matrix(&sections).map_err(pyerr)?;
    let report = parity_identity_matrix(&g).map_err(pyerr)?;
    Ok((report.n, report.m, report.heavy_triples, report.count2))
}

/// Classes as ((count1, count2), subset count) plus the number of skipped
/// degenerate subsets.
#[pyfunction]
#[pyo3(signature = (dataset=None, indices=None, size=4, limit=1_000_000, precision=256))]
fn classify(
    dataset: Option<&str>,
    indices: Option<Vec<String>>,
    size: usize,
    limit: u64,
    precision: u32,
) -> PyResult<(Vec<((usize, usize), usize)>, usize)> {
    let ds = dataset_from(dataset)?;
    let selection = selection_of(&ds, indices)?;
    let sections = sections_of(&ds, &selection, precision)?;
    let classification = classify_subsets(&sections, size, limit).map_err(pyerr)?;
    let classes = classification
        .classes
        .iter()
        .map(|(pair, subsets)| ((pair.count1, pair.count2), subsets.len()))
        .collect();
    Ok((classes, classification.skipped.len()))
}

/// Numeric search: ((a_re, a_im), (b_re, b_im), residual) per line found.
#[pyfunction]
#[pyo3(signature = (dataset=None, seeds=200, seed=1, tolerance=1e-8, expected=None))]
fn find_bitangents(
    dataset: Option<&str>,
    seeds: usize,
    seed: u64,
    tolerance: f64,
    expected: Option<usize>,
) -> PyResult<Vec<((f64, f64), (f64, f64), f64)>> {
    let ds = dataset_from(dataset)?;
    let opts = OracleOptions {
        seeds,
        seed,
        residual_tol: tolerance,
        expected,
        ..OracleOptions::default()
    };
    let lines = find_bitangents_numeric(&ds.curve, 1, &opts).map_err(pyerr)?;
    Ok(lines
        .iter()
        .map(|l| ((l.a.re, l.a.im), (l.b.re, l.b.im), l.residual))
        .collect())
}

/// Connected number of the selection by the floating-point oracle.
#[pyfunction]
#[pyo3(signature = (dataset=None, indices=None, tolerance=1e-6))]
fn oracle_connected(
    dataset: Option<&str>,
    indices: Option<Vec<String>>,
    tolerance: f64,
) -> PyResult<usize> {
    let ds = dataset_from(dataset)?;
    let selection = selection_of(&ds, indices)?;
    let lines: Vec<_> = selection.iter().map(|&i| ds.lines[i].line()).collect();
    let opts = OracleOptions {
        match_tol: tolerance,
        ..OracleOptions::default()
    };
    connected_number_numeric(&ds.curve, &lines, 1, &opts).map_err(pyerr)
}

#[pymodule]
fn quartica_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(klein_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(load_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(line_names, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(derive_sections, m)?)?;
    m.add_function(wrap_pyfunction!(gram, m)?)?;
    m.add_function(wrap_pyfunction!(connected, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_pair, m)?)?;
    m.add_function(wrap_pyfunction!(parity, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(find_bitangents, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_connected, m)?)?;
    Ok(())
}
