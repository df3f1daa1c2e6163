use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use intrinsic_holder::algebra::{LinearSection, NormedQuotient};
use intrinsic_holder::extension::FiberedFunction;
use intrinsic_holder::io;
use intrinsic_holder::metric::{FiniteMetricSpace, QuotientStructure, Section};
use intrinsic_holder::regularity::MeasureOnY;
use sha2::{Digest, Sha256};

/// Reads input files and remembers their bytes for the digest.
#[derive(Debug, Default)]
pub struct Loader {
    files: Vec<(String, Vec<u8>)>,
}

fn need<'a>(flag: &str, path: &'a Option<PathBuf>) -> Result<&'a Path> {
    path.as_deref().ok_or_else(|| anyhow!("missing required flag {flag}"))
}

impl Loader {
    pub fn text(&mut self, flag: &str, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("{flag} {}: cannot read file", path.display()))?;
        let text = String::from_utf8(bytes.clone()).with_context(|| format!("{flag} {}: not UTF-8", path.display()))?;
        self.files.push((flag.to_string(), bytes));
        Ok(text)
    }

    /// Record bundled bytes as if they had been read from disk.
    pub fn bundled(&mut self, label: &str, text: &str) {
        self.files.push((label.to_string(), text.as_bytes().to_vec()));
    }

    pub fn digest(&self, command: &str, canonical: &str) -> String {
        let mut h = Sha256::new();
        h.update(command.as_bytes());
        h.update([0]);
        h.update(canonical.as_bytes());
        for (label, bytes) in &self.files {
            h.update([0]);
            h.update(label.as_bytes());
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        hex::encode(h.finalize())
    }

    pub fn space(&mut self, path: &Option<PathBuf>) -> Result<FiniteMetricSpace<f64>> {
        let path = need("--space", path)?;
        let text = self.text("--space", path)?;
        let parsed = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            io::parse_space_csv(&text)
        } else {
            io::parse_space(&text)
        };
        parsed.with_context(|| format!("--space {}", path.display()))
    }

    pub fn quotient(&mut self, space: &FiniteMetricSpace<f64>, path: &Option<PathBuf>) -> Result<QuotientStructure> {
        let path = need("--quotient", path)?;
        let text = self.text("--quotient", path)?;
        io::parse_quotient(space, &text).with_context(|| format!("--quotient {}", path.display()))
    }

    pub fn section(
        &mut self,
        flag: &str,
        space: &FiniteMetricSpace<f64>,
        quotient: &QuotientStructure,
        path: &Option<PathBuf>,
    ) -> Result<Section> {
        let path = need(flag, path)?;
        let text = self.text(flag, path)?;
        io::parse_section(space, quotient, &text).with_context(|| format!("{flag} {}", path.display()))
    }

    pub fn optional_section(
        &mut self,
        flag: &str,
        space: &FiniteMetricSpace<f64>,
        quotient: &QuotientStructure,
        path: &Option<PathBuf>,
    ) -> Result<Option<Section>> {
        path.as_ref().map(|_| self.section(flag, space, quotient, path)).transpose()
    }

    /// A section given on some fibers only, as `(fiber, point)` pairs in fiber order.
    pub fn partial_section(
        &mut self,
        space: &FiniteMetricSpace<f64>,
        quotient: &QuotientStructure,
        path: &Option<PathBuf>,
    ) -> Result<Vec<(usize, usize)>> {
        let path = need("--section", path)?;
        let text = self.text("--section", path)?;
        let ctx = || format!("--section {}", path.display());
        let map: BTreeMap<String, String> = serde_json::from_str(&text).with_context(ctx)?;
        let mut pairs = Vec::with_capacity(map.len());
        for (fiber, point) in &map {
            let y = quotient.fiber_index(fiber).with_context(ctx)?;
            let x = space.index_of(point).with_context(ctx)?;
            if quotient.fiber_of(x) != y {
                bail!("{}: point `{point}` is not in fiber `{fiber}`", ctx());
            }
            pairs.push((y, x));
        }
        pairs.sort_unstable();
        Ok(pairs)
    }

    pub fn measure(&mut self, quotient: &QuotientStructure, path: &Option<PathBuf>) -> Result<MeasureOnY<f64>> {
        match path {
            None => Ok(MeasureOnY::counting(quotient)),
            Some(p) => {
                let text = self.text("--measure", p)?;
                io::parse_measure(quotient, &text).with_context(|| format!("--measure {}", p.display()))
            }
        }
    }

    pub fn fibered(&mut self, space: &FiniteMetricSpace<f64>, path: &Option<PathBuf>) -> Result<FiberedFunction<f64>> {
        let path = need("--fibered", path)?;
        let text = self.text("--fibered", path)?;
        io::parse_fibered(space, &text).with_context(|| format!("--fibered {}", path.display()))
    }

    pub fn normed(&mut self, path: &Option<PathBuf>) -> Result<NormedQuotient<f64>> {
        let path = need("--space", path)?;
        let text = self.text("--space", path)?;
        io::parse_normed_quotient(&text).with_context(|| format!("--space {}", path.display()))
    }

    pub fn linear_section(
        &mut self,
        flag: &str,
        nq: &NormedQuotient<f64>,
        path: &Option<PathBuf>,
    ) -> Result<LinearSection<f64>> {
        let path = need(flag, path)?;
        let text = self.text(flag, path)?;
        io::parse_linear_section(nq, &text).with_context(|| format!("{flag} {}", path.display()))
    }
}
