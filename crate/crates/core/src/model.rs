//! The latent ordinal model: sub-event templates, per-order costs and an
//! optional global template.

use alloc::vec;
use alloc::vec::Vec;

use crate::perm::factorial;
use crate::{Error, Result};

/// Largest supported number of sub-events. The cost table has `M!` entries.
pub const MAX_EVENTS: usize = 8;

/// Temporal pooling used to build the global descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Pooling {
    #[default]
    Mean,
    Max,
}

impl Pooling {
    pub fn name(self) -> &'static str {
        match self {
            Pooling::Mean => "mean",
            Pooling::Max => "max",
        }
    }
}

impl core::str::FromStr for Pooling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Pooling::Mean),
            "max" => Ok(Pooling::Max),
            other => Err(Error::InvalidConfig(alloc::format!("unknown pooling `{other}`"))),
        }
    }
}

/// Unvalidated model contents, used to build or take apart a [`Model`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParts {
    pub events: usize,
    pub dim: usize,
    /// `events * dim` values, template `i` at `[i * dim..(i + 1) * dim]`.
    pub templates: Vec<f64>,
    /// `events!` values; entry `j - 1` is the cost of order pattern rank `j`.
    pub ordering_costs: Vec<f64>,
    pub global_template: Option<Vec<f64>>,
    pub gamma_g: f64,
    pub pooling: Pooling,
    pub coverage: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Model {
    events: usize,
    dim: usize,
    templates: Vec<f64>,
    ordering_costs: Vec<f64>,
    global_template: Option<Vec<f64>>,
    gamma_g: f64,
    pooling: Pooling,
    coverage: usize,
}

impl Model {
    /// All-zero model. The global template is present iff `gamma_g > 0`.
    pub fn zeros(
        events: usize,
        dim: usize,
        gamma_g: f64,
        pooling: Pooling,
        coverage: usize,
    ) -> Result<Self> {
        check_events(events)?;
        Self::from_parts(ModelParts {
            events,
            dim,
            templates: vec![0.0; events * dim],
            ordering_costs: vec![0.0; factorial(events)],
            global_template: (gamma_g > 0.0).then(|| vec![0.0; dim]),
            gamma_g,
            pooling,
            coverage,
        })
    }

    pub fn from_parts(parts: ModelParts) -> Result<Self> {
        let ModelParts {
            events,
            dim,
            templates,
            ordering_costs,
            global_template,
            gamma_g,
            pooling,
            coverage,
        } = parts;
        check_events(events)?;
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be >= 1".into()));
        }
        if templates.len() != events * dim {
            return Err(Error::InvalidModel(alloc::format!(
                "expected {} template values, found {}",
                events * dim,
                templates.len()
            )));
        }
        if ordering_costs.len() != factorial(events) {
            return Err(Error::InvalidModel(alloc::format!(
                "ordering cost table must have {}! = {} entries, found {}",
                events,
                factorial(events),
                ordering_costs.len()
            )));
        }
        if !(0.0..=1.0).contains(&gamma_g) {
            return Err(Error::InvalidModel(alloc::format!("gamma_g = {gamma_g} outside [0, 1]")));
        }
        match &global_template {
            Some(g) if g.len() != dim => {
                return Err(Error::DimensionMismatch { expected: dim, found: g.len() });
            }
            None if gamma_g != 0.0 => {
                return Err(Error::InvalidModel("gamma_g > 0 requires a global template".into()));
            }
            _ => {}
        }
        let finite = templates
            .iter()
            .chain(&ordering_costs)
            .chain(global_template.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidModel("non-finite parameter".into()));
        }
        Ok(Model { events, dim, templates, ordering_costs, global_template, gamma_g, pooling, coverage })
    }

    pub fn into_parts(self) -> ModelParts {
        ModelParts {
            events: self.events,
            dim: self.dim,
            templates: self.templates,
            ordering_costs: self.ordering_costs,
            global_template: self.global_template,
            gamma_g: self.gamma_g,
            pooling: self.pooling,
            coverage: self.coverage,
        }
    }

    /// Number of sub-event templates `M`.
    pub fn events(&self) -> usize {
        self.events
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn template(&self, i: usize) -> &[f64] {
        &self.templates[i * self.dim..(i + 1) * self.dim]
    }

    pub fn templates(&self) -> &[f64] {
        &self.templates
    }

    pub fn ordering_costs(&self) -> &[f64] {
        &self.ordering_costs
    }

    /// Cost of the order pattern with 1-based rank `rank`.
    #[inline]
    pub fn ordering_cost(&self, rank: usize) -> f64 {
        self.ordering_costs[rank - 1]
    }

    pub fn global_template(&self) -> Option<&[f64]> {
        self.global_template.as_deref()
    }

    pub fn gamma_g(&self) -> f64 {
        self.gamma_g
    }

    pub fn pooling(&self) -> Pooling {
        self.pooling
    }

    /// Suppression radius `t` requested at training time. Inference clamps it
    /// per sequence, see [`crate::effective_t`].
    pub fn coverage(&self) -> usize {
        self.coverage
    }

    pub fn with_coverage(mut self, coverage: usize) -> Self {
        self.coverage = coverage;
        self
    }

    /// Multiplies every template, cost and the global template by `alpha`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let mut m = self.clone();
        m.templates.iter_mut().for_each(|v| *v *= alpha);
        m.ordering_costs.iter_mut().for_each(|v| *v *= alpha);
        if let Some(g) = &mut m.global_template {
            g.iter_mut().for_each(|v| *v *= alpha);
        }
        m
    }

    /// `sum_i |w_i|^2 + |w_g|^2`
    pub fn weight_norm_sq(&self) -> f64 {
        let local = crate::linalg::norm_sq(&self.templates);
        local + self.global_template.as_deref().map_or(0.0, crate::linalg::norm_sq)
    }

    pub fn cost_norm_sq(&self) -> f64 {
        crate::linalg::norm_sq(&self.ordering_costs)
    }

    pub(crate) fn template_mut(&mut self, i: usize) -> &mut [f64] {
        let d = self.dim;
        &mut self.templates[i * d..(i + 1) * d]
    }

    pub(crate) fn ordering_costs_mut(&mut self) -> &mut [f64] {
        &mut self.ordering_costs
    }

    pub(crate) fn global_template_mut(&mut self) -> Option<&mut Vec<f64>> {
        self.global_template.as_mut()
    }
}

fn check_events(events: usize) -> Result<()> {
    if events == 0 || events > MAX_EVENTS {
        return Err(Error::InvalidModel(alloc::format!(
            "number of events must be in [1, {MAX_EVENTS}], got {events}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_has_factorial_cost_table() {
        for m in 1..=MAX_EVENTS {
            let model = Model::zeros(m, 3, 0.0, Pooling::Mean, 0).unwrap();
            assert_eq!(model.ordering_costs().len(), factorial(m));
            assert_eq!(model.templates().len(), 3 * m);
            assert!(model.global_template().is_none());
        }
        assert!(Model::zeros(0, 3, 0.0, Pooling::Mean, 0).is_err());
        assert!(Model::zeros(MAX_EVENTS + 1, 3, 0.0, Pooling::Mean, 0).is_err());
    }

    #[test]
    fn gamma_requires_global_template() {
        let mut parts = Model::zeros(2, 2, 0.0, Pooling::Mean, 0).unwrap().into_parts();
        parts.gamma_g = 0.5;
        assert!(Model::from_parts(parts.clone()).is_err());
        parts.global_template = Some(vec![0.0; 2]);
        assert!(Model::from_parts(parts.clone()).is_ok());
        parts.gamma_g = 1.5;
        assert!(Model::from_parts(parts.clone()).is_err());
        parts.gamma_g = 0.5;
        parts.global_template = Some(vec![0.0; 3]);
        assert!(Model::from_parts(parts).is_err());
    }

    #[test]
    fn rejects_wrong_table_sizes() {
        let mut parts = Model::zeros(3, 2, 0.0, Pooling::Mean, 0).unwrap().into_parts();
        parts.ordering_costs.pop();
        assert!(Model::from_parts(parts.clone()).is_err());
        parts.ordering_costs.push(f64::NAN);
        assert!(Model::from_parts(parts).is_err());
    }

    #[test]
    fn pooling_parses() {
        assert_eq!("mean".parse::<Pooling>().unwrap(), Pooling::Mean);
        assert_eq!("max".parse::<Pooling>().unwrap(), Pooling::Max);
        assert!("median".parse::<Pooling>().is_err());
    }
}
