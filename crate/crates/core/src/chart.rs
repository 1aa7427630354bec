use std::collections::BTreeSet;

use crate::expr::Sampler;
use crate::Error;

/// Ordered coordinate names with optional sampling bounds per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    names: Vec<String>,
    bounds: Vec<Option<(f64, f64)>>,
}

impl Chart {
    pub const MIN_DIM: usize = 2;
    pub const MAX_DIM: usize = 4;

    pub fn new<I, S>(names: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if !(Self::MIN_DIM..=Self::MAX_DIM).contains(&names.len()) {
            return Err(Error::InvalidChart(format!(
                "dimension {} outside {}..={}",
                names.len(),
                Self::MIN_DIM,
                Self::MAX_DIM
            )));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            let valid = n
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || crate::expr::Function::from_name(n).is_some() || n == "pi" {
                return Err(Error::InvalidChart(format!("bad coordinate name `{n}`")));
            }
            if !seen.insert(n.clone()) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{n}`")));
            }
        }
        let bounds = vec![None; names.len()];
        Ok(Chart { names, bounds })
    }

    /// Sampling and integration domain `lo < x < hi` for one axis.
    pub fn with_bounds(mut self, coord: &str, lo: f64, hi: f64) -> Result<Self, Error> {
        let i = self
            .index_of(coord)
            .ok_or_else(|| Error::UnknownCoordinate(coord.to_string()))?;
        if !(lo < hi) {
            return Err(Error::InvalidChart(format!("empty interval for `{coord}`")));
        }
        self.bounds[i] = Some((lo, hi));
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, coord: &str) -> Option<usize> {
        self.names.iter().position(|n| n == coord)
    }

    pub fn bounds(&self, i: usize) -> Option<(f64, f64)> {
        self.bounds[i]
    }

    /// True when every bounded coordinate lies strictly inside its interval.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(&self.bounds)
            .all(|(v, b)| v.is_finite() && b.is_none_or(|(lo, hi)| *v > lo && *v < hi))
    }

    /// Sampler honouring this chart's bounds.
    pub fn sampler(&self, seed: u64) -> Sampler {
        let mut s = Sampler::new(seed);
        for (n, b) in self.names.iter().zip(&self.bounds) {
            if let Some((lo, hi)) = b {
                s = s.with_bounds(n, *lo, *hi);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_charts() {
        assert!(Chart::new(["x"]).is_err());
        assert!(Chart::new(["a", "b", "c", "d", "e"]).is_err());
        assert!(Chart::new(["x", "x"]).is_err());
        assert!(Chart::new(["x", "sin"]).is_err());
        assert!(Chart::new(["x", "y"])
            .unwrap()
            .with_bounds("z", 0.0, 1.0)
            .is_err());
    }

    #[test]
    fn bounds_are_open() {
        let c = Chart::new(["r", "phi"])
            .unwrap()
            .with_bounds("r", 0.0, 10.0)
            .unwrap();
        assert!(c.contains(&[1.0, -100.0]));
        assert!(!c.contains(&[0.0, 0.0]));
    }
}
