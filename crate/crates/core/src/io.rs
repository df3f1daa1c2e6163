//! JSON and CSV input formats.
//!
//! Space: `{"points": [ids], "dist": [[..]]}`, or `"edges": [[u, v, w], ..]`
//! for a graph metric, or `"coords": [[..]]` with optional `"p"` (default 2).
//! Quotient: `{"fibers": {"F1": ["a", "b"], ..}}` (fibers in key order) or
//! `{"fibers": [{"id": "F1", "points": ["a", "b"]}, ..]}` (given order).
//! Section: `{"F1": "a", ..}`. Measure: `{"F1": 1.0, ..}`.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::algebra::{LinearSection, NormKind, NormedQuotient};
use crate::error::{Error, Result};
use crate::extension::{FiberedFunction, FiberedValues};
use crate::holder::HolderParams;
use crate::metric::{build_space, make_quotient, FiniteMetricSpace, QuotientStructure, Section, SpaceSource};
use crate::regularity::MeasureOnY;
use crate::scalar::Scalar;

fn parse<'a, D: Deserialize<'a>>(text: &'a str, what: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("{what}: {e}")))
}

fn conv<T: Scalar>(v: &[f64]) -> Vec<T> {
    v.iter().map(|&x| T::of(x)).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    points: Vec<String>,
    dist: Option<Vec<Vec<f64>>>,
    edges: Option<Vec<(String, String, f64)>>,
    coords: Option<Vec<Vec<f64>>>,
    p: Option<f64>,
}

pub fn parse_space<T: Scalar>(text: &str) -> Result<FiniteMetricSpace<T>> {
    let f: SpaceFile = parse(text, "space")?;
    let source = match (f.dist, f.edges, f.coords) {
        (Some(rows), None, None) => SpaceSource::Table { ids: f.points, rows: rows.iter().map(|r| conv(r)).collect() },
        (None, Some(edges), None) => {
            let pos = |id: &str| {
                f.points.iter().position(|p| p == id).ok_or_else(|| Error::UnknownPoint(id.to_string()))
            };
            let edges = edges
                .iter()
                .map(|(u, v, w)| Ok((pos(u)?, pos(v)?, T::of(*w))))
                .collect::<Result<Vec<_>>>()?;
            SpaceSource::Graph { ids: f.points, edges }
        }
        (None, None, Some(coords)) => SpaceSource::Cloud {
            ids: f.points,
            coords: coords.iter().map(|c| conv(c)).collect(),
            p: T::of(f.p.unwrap_or(2.0)),
        },
        _ => return Err(Error::Input("space: give exactly one of `dist`, `edges`, `coords`".into())),
    };
    build_space(source)
}

/// Distance matrix as CSV: a header row of ids, then one row of numbers per
/// point. A header starting with an empty cell marks a leading label column.
pub fn parse_space_csv<T: Scalar>(text: &str) -> Result<FiniteMetricSpace<T>> {
    let bad = |e: csv::Error| Error::Input(format!("distance CSV: {e}"));
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().map_err(bad)?.iter().map(String::from).collect();
    let labelled = header.first().is_some_and(String::is_empty);
    let ids: Vec<String> = if labelled { header[1..].to_vec() } else { header };
    let mut rows = Vec::with_capacity(ids.len());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(bad)?;
        let cells = record.iter().skip(usize::from(labelled));
        let name = |k: usize| ids.get(k).cloned().unwrap_or_else(|| format!("#{k}"));
        let row = cells
            .enumerate()
            .map(|(j, c)| c.parse::<f64>().map(T::of).map_err(|_| Error::InvalidDistance(name(i), name(j))))
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    build_space(SpaceSource::Table { ids, rows })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FiberList {
    Map(BTreeMap<String, Vec<String>>),
    List(Vec<FiberEntry>),
}

#[derive(Deserialize)]
struct FiberEntry {
    id: String,
    points: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientFile {
    fibers: FiberList,
}

pub fn parse_quotient<T: Scalar>(space: &FiniteMetricSpace<T>, text: &str) -> Result<QuotientStructure> {
    let f: QuotientFile = parse(text, "quotient")?;
    let blocks = match f.fibers {
        FiberList::Map(m) => m.into_iter().collect(),
        FiberList::List(l) => l.into_iter().map(|e| (e.id, e.points)).collect(),
    };
    make_quotient(space, blocks)
}

pub fn parse_section<T: Scalar>(space: &FiniteMetricSpace<T>, quotient: &QuotientStructure, text: &str) -> Result<Section> {
    let map: BTreeMap<String, String> = parse(text, "section")?;
    let pairs: Vec<(&str, &str)> = map.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    Section::from_ids(space, quotient, &pairs)
}

pub fn parse_measure<T: Scalar>(quotient: &QuotientStructure, text: &str) -> Result<MeasureOnY<T>> {
    let map: BTreeMap<String, f64> = parse(text, "measure")?;
    let weights: Vec<(String, T)> = map.into_iter().map(|(k, v)| (k, T::of(v))).collect();
    MeasureOnY::from_ids(quotient, &weights)
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum NormSpec {
    Euclidean,
    P(f64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormedFile {
    matrix: Vec<Vec<f64>>,
    #[serde(default = "euclidean")]
    norm: NormSpec,
    sample: Vec<Vec<f64>>,
}

fn euclidean() -> NormSpec {
    NormSpec::Euclidean
}

/// `{"matrix": [[..]], "norm": "euclidean" | {"p": 3}, "sample": [[..]]}`
pub fn parse_normed_quotient<T: Scalar>(text: &str) -> Result<NormedQuotient<T>> {
    let f: NormedFile = parse(text, "normed quotient")?;
    let norm = match f.norm {
        NormSpec::Euclidean => NormKind::Euclidean,
        NormSpec::P(p) => NormKind::P(T::of(p)),
    };
    let rows: Vec<Vec<T>> = f.matrix.iter().map(|r| conv(r)).collect();
    NormedQuotient::new(&rows, norm, f.sample.iter().map(|s| conv(s)).collect())
}

/// `{"table": [[..]]}`, one ambient point per sample point.
pub fn parse_linear_section<T: Scalar>(nq: &NormedQuotient<T>, text: &str) -> Result<LinearSection<T>> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct F {
        table: Vec<Vec<f64>>,
    }
    let f: F = parse(text, "linear section")?;
    LinearSection::new(nq, f.table.iter().map(|r| conv(r)).collect())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberedFile {
    values: Option<BTreeMap<String, f64>>,
    target: Option<serde_json::Value>,
    image: Option<BTreeMap<String, String>>,
    lambda: f64,
    beta: f64,
    fiber_bilip: f64,
}

fn covers<T: Scalar, V>(space: &FiniteMetricSpace<T>, m: &BTreeMap<String, V>) -> Result<()> {
    if let Some(id) = space.ids().iter().find(|id| !m.contains_key(*id)) {
        return Err(Error::Input(format!("fibered function: no value for point `{id}`")));
    }
    if let Some(id) = m.keys().find(|k| space.index_of(k).is_err()) {
        return Err(Error::UnknownPoint(id.clone()));
    }
    Ok(())
}

/// Real values `{"values": {"a": 1.0, ..}, ..}` or a map into a target space
/// `{"target": <space>, "image": {"a": "z", ..}, ..}`, with the claims
/// `"lambda"`, `"beta"` and `"fiber_bilip"`.
pub fn parse_fibered<T: Scalar>(space: &FiniteMetricSpace<T>, text: &str) -> Result<FiberedFunction<T>> {
    let f: FiberedFile = parse(text, "fibered function")?;
    let holder = HolderParams::new(T::of(f.lambda), T::of(f.beta))?;
    let fiber_bilip = T::of(f.fiber_bilip);
    let values = match (f.values, f.target, f.image) {
        (Some(v), None, None) => {
            covers(space, &v)?;
            FiberedValues::Real(space.ids().iter().map(|id| T::of(v[id])).collect())
        }
        (None, Some(target), Some(image)) => {
            covers(space, &image)?;
            let target: FiniteMetricSpace<T> = parse_space(&target.to_string())?;
            let image = space.ids().iter().map(|id| target.index_of(&image[id])).collect::<Result<Vec<_>>>()?;
            FiberedValues::Points { target, image }
        }
        _ => return Err(Error::Input("fibered function: give `values`, or `target` with `image`".into())),
    };
    Ok(FiberedFunction { values, holder, fiber_bilip })
}
