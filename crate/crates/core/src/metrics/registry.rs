use super::table::restrict_to_shared;
use super::{a2a, a2a_adj, ari, c2c_cvg, mojo_fm};
use crate::error::{Error, Result};
use crate::model::Architecture;

/// A similarity score of a recovered architecture against a reference, in percent.
pub trait ArchitectureMetric: Send + Sync {
    fn name(&self) -> &str;
    fn compute(&self, recovered: &Architecture, reference: &Architecture) -> Result<f64>;
}

struct MojoFm;
struct A2a;
struct C2cCvg(f64);
struct Ari;
struct A2aAdj;

impl ArchitectureMetric for MojoFm {
    fn name(&self) -> &str {
        "mojofm"
    }

    fn compute(&self, recovered: &Architecture, reference: &Architecture) -> Result<f64> {
        let (a, b) = restrict_to_shared(recovered, reference)?;
        mojo_fm(&a, &b)
    }
}

impl ArchitectureMetric for A2a {
    fn name(&self) -> &str {
        "a2a"
    }

    fn compute(&self, recovered: &Architecture, reference: &Architecture) -> Result<f64> {
        a2a(recovered, reference)
    }
}

impl ArchitectureMetric for C2cCvg {
    fn name(&self) -> &str {
        "c2c_cvg"
    }

    fn compute(&self, recovered: &Architecture, reference: &Architecture) -> Result<f64> {
        c2c_cvg(recovered, reference, self.0)
    }
}

impl ArchitectureMetric for Ari {
    fn name(&self) -> &str {
        "ari"
    }

    fn compute(&self, recovered: &Architecture, reference: &Architecture) -> Result<f64> {
        let (a, b) = restrict_to_shared(recovered, reference)?;
        Ok(ari(&a, &b)? * 100.0)
    }
}

impl ArchitectureMetric for A2aAdj {
    fn name(&self) -> &str {
        "a2a_adj"
    }

    fn compute(&self, recovered: &Architecture, reference: &Architecture) -> Result<f64> {
        a2a_adj(recovered, reference)
    }
}

/// Metrics selectable by name, in registration order.
pub struct MetricRegistry {
    metrics: Vec<Box<dyn ArchitectureMetric>>,
}

impl MetricRegistry {
    pub fn empty() -> Self {
        MetricRegistry { metrics: Vec::new() }
    }

    /// The five standard metrics; `c2c_threshold` configures c2c_cvg.
    pub fn standard(c2c_threshold: f64) -> Self {
        let mut r = Self::empty();
        r.register(Box::new(MojoFm));
        r.register(Box::new(A2a));
        r.register(Box::new(C2cCvg(c2c_threshold)));
        r.register(Box::new(Ari));
        r.register(Box::new(A2aAdj));
        r
    }

    /// Adds `metric`, replacing any metric registered under the same name.
    pub fn register(&mut self, metric: Box<dyn ArchitectureMetric>) {
        match self.metrics.iter().position(|m| m.name() == metric.name()) {
            Some(i) => self.metrics[i] = metric,
            None => self.metrics.push(metric),
        }
    }

    pub fn names(&self) -> Vec<&str> {
        self.metrics.iter().map(|m| m.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn ArchitectureMetric> {
        self.metrics
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "metric",
                name: name.to_string(),
            })
    }

    /// Scores for `names` (all registered metrics when empty), in selection order.
    pub fn evaluate(
        &self,
        names: &[String],
        recovered: &Architecture,
        reference: &Architecture,
    ) -> Result<Vec<(String, f64)>> {
        let selected: Vec<&dyn ArchitectureMetric> = if names.is_empty() {
            self.metrics.iter().map(|m| m.as_ref()).collect()
        } else {
            names.iter().map(|n| self.get(n)).collect::<Result<_>>()?
        };
        selected
            .into_iter()
            .map(|m| Ok((m.name().to_string(), m.compute(recovered, reference)?)))
            .collect()
    }
}
