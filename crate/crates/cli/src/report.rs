use std::fmt::Write;

use polyrank::{PolyMatrix, PrimeField};
use serde::{Deserialize, Serialize};

/// Coefficient lists of a matrix, row by row.
pub type Coefficients = Vec<Vec<Vec<u64>>>;

/// The machine-readable result of a command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub prime: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<usize>,
    #[serde(default)]
    pub basis: Coefficients,
    #[serde(default)]
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub degree_sum: usize,
    #[serde(default)]
    pub retries_used: usize,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Coefficients>,
}

impl Report {
    pub fn new(command: &str, f: PrimeField, seed: u64) -> Report {
        Report {
            command: command.to_string(),
            prime: f.modulus(),
            seed,
            rank: None,
            kappa: None,
            basis: Vec::new(),
            degrees: Vec::new(),
            degree_sum: 0,
            retries_used: 0,
            certified: false,
            product: None,
        }
    }

    /// Records `basis` with its row degrees.
    pub fn with_basis(mut self, basis: &PolyMatrix) -> Report {
        self.basis = coefficients(basis);
        self.degrees = basis.row_degrees().iter().map(|d| d.to_usize().unwrap_or(0)).collect();
        self.degree_sum = self.degrees.iter().sum();
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        let _ = writeln!(s, "prime: {}", self.prime);
        let _ = writeln!(s, "seed: {}", self.seed);
        if let Some(r) = self.rank {
            let _ = writeln!(s, "rank: {r}");
        }
        if let Some(k) = self.kappa {
            let _ = writeln!(s, "kappa: {k}");
        }
        let brief = self.command == "mul" || self.command == "rank";
        if !brief {
            let _ = writeln!(s, "degrees: {:?}", self.degrees);
            let _ = writeln!(s, "degree_sum: {}", self.degree_sum);
        }
        if self.command != "mul" {
            let _ = writeln!(s, "retries_used: {}", self.retries_used);
        }
        let _ = writeln!(s, "certified: {}", self.certified);
        let rows = self.product.as_ref().unwrap_or(&self.basis);
        if !rows.is_empty() && self.command != "rank" {
            let _ = writeln!(s, "{}:", if self.product.is_some() { "product" } else { "basis" });
            for row in rows {
                let entries: Vec<String> = row.iter().map(|c| render(c)).collect();
                let _ = writeln!(s, "  [{}]", entries.join(", "));
            }
        }
        s
    }
}

pub fn coefficients(m: &PolyMatrix) -> Coefficients {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|p| p.coeffs().to_vec()).collect())
        .collect()
}

/// A polynomial from ascending coefficients, highest degree first.
fn render(coeffs: &[u64]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| match (k, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (k, 1) => format!("x^{k}"),
            (k, c) => format!("{c}x^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}
