use crate::error::{Error, Result};

/// Per-vertex fugacities `λ(v)`.
///
/// When every weight is equal the vector remembers the common value, and
/// samplers take the cheaper uniform code path. The detection happens at
/// construction, so `uniform(n, λ)` and `from_values(vec![λ; n])` behave
/// identically.
#[derive(Debug, Clone, PartialEq)]
pub struct Fugacities {
    values: Vec<f64>,
    uniform: Option<f64>,
}

impl Fugacities {
    pub fn uniform(n: usize, lambda: f64) -> Result<Self> {
        Self::from_values(vec![lambda; n])
    }

    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if let Some((v, &bad)) = values.iter().enumerate().find(|(_, &x)| !(x.is_finite() && x > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "fugacity of vertex {v} must be positive and finite, got {bad}"
            )));
        }
        let uniform = match values.first() {
            Some(&first) if values.iter().all(|&x| x == first) => Some(first),
            _ => None,
        };
        Ok(Self { values, uniform })
    }

    #[inline]
    pub fn get(&self, v: usize) -> f64 {
        self.values[v]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The common value when all vertices share one fugacity.
    pub fn uniform_value(&self) -> Option<f64> {
        self.uniform
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Drops the uniform shortcut so samplers use the weighted code path even
    /// for equal weights.
    pub fn into_weighted(mut self) -> Self {
        self.uniform = None;
        self
    }

    /// `λ(v) / (λ(v) + 1)`: the Gibbs threshold for an addition.
    #[inline]
    pub fn add_probability(&self, v: usize) -> f64 {
        let lambda = self.values[v];
        lambda / (lambda + 1.0)
    }
}
