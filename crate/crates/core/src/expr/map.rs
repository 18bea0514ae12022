use alloc::vec::Vec;

use super::{DomainBox, ExprError, NashExpr};

/// A Nash map `R^source -> R^target` given by one expression per component.
#[derive(Clone, Debug, PartialEq)]
pub struct NashMap {
    source: usize,
    domain: DomainBox,
    components: Vec<NashExpr>,
}

impl NashMap {
    pub fn new(source: usize, components: Vec<NashExpr>) -> Self {
        let domain = components
            .iter()
            .fold(DomainBox::unbounded(source), |d, c| {
                assert_eq!(c.arity(), source, "component arity must equal source dimension");
                d.intersect(c.domain())
            });
        NashMap { source, domain, components }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| NashExpr::var(n, i)).collect())
    }

    pub fn source_dim(&self) -> usize {
        self.source
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn components(&self) -> &[NashExpr] {
        &self.components
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, ExprError> {
        if x.len() != self.source {
            return Err(ExprError::DimensionMismatch { expected: self.source, found: x.len() });
        }
        if !self.domain.contains(x) {
            return Err(ExprError::OutOfDomain);
        }
        self.components.iter().map(|c| c.node().eval(x)).collect()
    }

    /// Symbolic Jacobian, row `i` holding the gradient of component `i`.
    pub fn jacobian(&self) -> Vec<Vec<NashExpr>> {
        self.components.iter().map(|c| c.gradient()).collect()
    }

    pub fn jacobian_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, ExprError> {
        self.jacobian()
            .iter()
            .map(|row| row.iter().map(|e| e.eval(x)).collect())
            .collect()
    }

    pub fn jacobian_fd(&self, x: &[f64], step: f64) -> Result<Vec<Vec<f64>>, ExprError> {
        self.components
            .iter()
            .map(|c| (0..self.source).map(|i| c.partial_fd(i, x, step)).collect())
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &NashMap) -> Result<NashMap, ExprError> {
        if inner.target_dim() != self.source {
            return Err(ExprError::DimensionMismatch {
                expected: self.source,
                found: inner.target_dim(),
            });
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<Vec<_>, _>>()?;
        let comps = comps
            .into_iter()
            .map(|c| c.with_domain(inner.domain.clone()))
            .collect();
        Ok(NashMap { source: inner.source, domain: inner.domain.clone(), components: comps })
    }
}
