//! Reports written by the command-line tool.

use ifsx_core::charvec::{analyze, Analysis, CharVec};
use ifsx_core::dimension::SimilarityDimension;
use ifsx_core::separation::SscVerdict;
use ifsx_core::{Budget, IfsSystem, Result};
use serde::Serialize;
use std::fmt::{self, Write as _};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    Certified,
    Provisional,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub value: String,
    pub lower: f64,
    pub upper: f64,
    /// `ρ^s = 1/N` is recorded exactly for homogeneous systems.
    pub symbolic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub maps: usize,
    pub ambient_dimension: usize,
    pub similarity_dimension: DimensionReport,
    pub homogeneous: bool,
    pub ratio: Option<String>,
    /// 1-based index pairs with certified intersecting images.
    pub edges: Vec<(usize, usize)>,
    pub undecided: Vec<(usize, usize)>,
    /// 1-based components.
    pub components: Vec<Vec<usize>>,
    pub component_sizes: Vec<usize>,
    pub gamma: CharVec,
    pub gamma_text: String,
    pub ssc: String,
    pub certification: Certification,
}

fn one_based(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    pairs.iter().map(|&(i, j)| (i + 1, j + 1)).collect()
}

impl AnalysisReport {
    pub fn build(sys: &IfsSystem, budget: &Budget) -> Result<Self> {
        Ok(Self::from_analysis(sys, &analyze(sys, budget)?))
    }

    pub fn from_analysis(sys: &IfsSystem, a: &Analysis) -> Self {
        let dim: &SimilarityDimension = sys.similarity_dimension();
        let enclosure = dim.enclosure();
        let ssc = match &a.ssc {
            SscVerdict::Ssc { delta } => format!("holds, δ ≥ {delta}"),
            SscVerdict::NotSsc { pair, .. } => format!("fails: images {} and {} meet", pair.0 + 1, pair.1 + 1),
            SscVerdict::Undecided { pairs } => format!("undecided, {} pairs open", pairs.len()),
        };
        AnalysisReport {
            maps: sys.len(),
            ambient_dimension: sys.dim(),
            similarity_dimension: DimensionReport {
                value: dim.to_string(),
                lower: enclosure.lo(),
                upper: enclosure.hi(),
                symbolic: dim.is_symbolic(),
            },
            homogeneous: sys.is_homogeneous(),
            ratio: sys.common_ratio().map(ToString::to_string),
            edges: one_based(&a.edges),
            undecided: one_based(&a.undecided),
            components: a
                .partition
                .components()
                .iter()
                .map(|c| c.iter().map(|i| i + 1).collect())
                .collect(),
            component_sizes: a.partition.sizes(),
            gamma: a.gamma.clone(),
            gamma_text: a.gamma.to_string(),
            ssc,
            certification: if a.partition.is_provisional() {
                Certification::Provisional
            } else {
                Certification::Certified
            },
        }
    }

    pub fn is_provisional(&self) -> bool {
        self.certification == Certification::Provisional
    }
}

fn list(items: &[Vec<usize>]) -> String {
    let mut out = String::from("{");
    for (k, c) in items.iter().enumerate() {
        if k > 0 {
            out.push_str(", ");
        }
        out.push('{');
        for (t, i) in c.iter().enumerate() {
            if t > 0 {
                out.push(',');
            }
            let _ = write!(out, "{i}");
        }
        out.push('}');
    }
    out.push('}');
    out
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "maps: {} in dimension {}", self.maps, self.ambient_dimension)?;
        writeln!(f, "similarity dimension: {}", self.similarity_dimension.value)?;
        match &self.ratio {
            Some(r) => writeln!(f, "homogeneous: ratio {r}")?,
            None => writeln!(f, "homogeneous: no")?,
        }
        let edges: Vec<String> = self.edges.iter().map(|(i, j)| format!("{i}~{j}")).collect();
        writeln!(f, "edges: [{}]", edges.join(", "))?;
        if !self.undecided.is_empty() {
            let open: Vec<String> = self.undecided.iter().map(|(i, j)| format!("{i}?{j}")).collect();
            writeln!(f, "undecided: [{}]", open.join(", "))?;
        }
        writeln!(f, "components: {}", list(&self.components))?;
        writeln!(f, "SSC: {}", self.ssc)?;
        writeln!(f, "gamma: {}", self.gamma_text)?;
        writeln!(
            f,
            "certification: {}",
            match self.certification {
                Certification::Certified => "certified",
                Certification::Provisional => "provisional",
            }
        )
    }
}
