//! Element-wise activation functions for the reservoir units.
//!
//! The standard registry holds ten functions:
//!
//! | name          | definition                    | parity  |
//! |---------------|-------------------------------|---------|
//! | `tanh`        | tanh(x)                       | odd     |
//! | `linear`      | x                             | odd     |
//! | `sinc`        | sin(πx)/(πx), sinc(0) = 1     | even    |
//! | `gaussian`    | exp(-x²/2)                    | even    |
//! | `mexican_hat` | (1 - x²) exp(-x²/2)           | even    |
//! | `morlet`      | cos(5x) exp(-x²/2)            | even    |
//! | `nmr`         | x exp(-x²/2)                  | odd     |
//! | `laplace`     | exp(-\|x\|)                   | even    |
//! | `cos`         | cos(x)                        | even    |
//! | `sin`         | sin(x)                        | odd     |
//!
//! A [`Registry`] can be extended or have entries replaced at runtime.

use std::borrow::Cow;
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
    Neither,
}

/// A named scalar nonlinearity.
#[derive(Debug, Clone)]
pub struct ActivationFn {
    name: Cow<'static, str>,
    func: fn(f64) -> f64,
    parity: Parity,
    monotonic: bool,
}

impl ActivationFn {
    pub fn new(
        name: impl Into<Cow<'static, str>>,
        func: fn(f64) -> f64,
        parity: Parity,
        monotonic: bool,
    ) -> Self {
        Self {
            name: name.into(),
            func,
            parity,
            monotonic,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_monotonic(&self) -> bool {
        self.monotonic
    }

    /// Evaluates the function, rejecting non-finite input.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain { index: 0, value: x });
        }
        Ok((self.func)(x))
    }

    /// Evaluates element-wise. Errors carry the index of the first non-finite entry.
    pub fn eval_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        v.iter()
            .enumerate()
            .map(|(index, &x)| {
                if x.is_finite() {
                    Ok((self.func)(x))
                } else {
                    Err(Error::Domain { index, value: x })
                }
            })
            .collect()
    }

    /// Applies the function in place without a finiteness check.
    pub(crate) fn apply_unchecked(&self, v: &mut [f64]) {
        for x in v {
            *x = (self.func)(*x);
        }
    }
}

fn linear(x: f64) -> f64 {
    x
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

fn gaussian(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}

fn mexican_hat(x: f64) -> f64 {
    (1.0 - x * x) * (-0.5 * x * x).exp()
}

fn morlet(x: f64) -> f64 {
    (5.0 * x).cos() * (-0.5 * x * x).exp()
}

fn nmr(x: f64) -> f64 {
    x * (-0.5 * x * x).exp()
}

fn laplace(x: f64) -> f64 {
    (-x.abs()).exp()
}

/// The ten standard activations in their canonical order.
pub fn registry() -> Vec<ActivationFn> {
    use Parity::*;
    vec![
        ActivationFn::new("tanh", f64::tanh, Odd, true),
        ActivationFn::new("linear", linear, Odd, true),
        ActivationFn::new("sinc", sinc, Even, false),
        ActivationFn::new("gaussian", gaussian, Even, false),
        ActivationFn::new("mexican_hat", mexican_hat, Even, false),
        ActivationFn::new("morlet", morlet, Even, false),
        ActivationFn::new("nmr", nmr, Odd, false),
        ActivationFn::new("laplace", laplace, Even, false),
        ActivationFn::new("cos", f64::cos, Even, false),
        ActivationFn::new("sin", f64::sin, Odd, false),
    ]
}

/// Looks up a standard activation by name.
pub fn lookup(name: &str) -> Result<ActivationFn> {
    Registry::standard().get(name).cloned()
}

/// Ordered, name-unique collection of activations.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<ActivationFn>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

impl Registry {
    pub fn standard() -> Self {
        Self {
            entries: registry(),
        }
    }

    /// Adds `f`, replacing an existing entry with the same name in place.
    pub fn register(&mut self, f: ActivationFn) {
        match self.entries.iter_mut().find(|e| e.name == f.name) {
            Some(slot) => *slot = f,
            None => self.entries.push(f),
        }
    }

    pub fn get(&self, name: &str) -> Result<&ActivationFn> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| Error::UnknownActivation {
                name: name.to_string(),
                valid: self.names().map(str::to_string).collect(),
            })
    }

    /// Position of `name` in registry order.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        let f = self.get(name)?;
        Ok(self.entries.iter().position(|e| e.name == f.name).unwrap())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActivationFn> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
