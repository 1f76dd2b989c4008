//! Name-keyed registry of evaluation schemes.
//!
//! Every entry implements [`Scheme`]: the achievable beamformers through the
//! [`Solver`] trait and the upper bound directly. The harness looks schemes
//! up by name at run time and always evaluates them in registry order.

use std::fmt;

use crate::algorithms::{
    Asa, AsaConfig, Lss, LssConfig, MaxSinr2, MaxSnr1, Pia, PiaConfig, PureAmplification, Solver,
};
use crate::model::{ChannelSet, SystemParams};
use crate::reformulation::{QuadraticForms, Solution};
use crate::upper_bound::{self, BoundBreakdown, BoundConfig};
use crate::{Error, Result};

/// Names of the built-in schemes, in registry order.
pub const DEFAULT_NAMES: [&str; 7] = [
    "pia", "asa", "lss", "maxsnr1", "maxsinr2", "pureamp", "upper",
];

/// One channel realization with its forms built once and shared by every
/// scheme.
#[derive(Debug, Clone)]
pub struct Instance {
    pub params: SystemParams,
    pub channels: ChannelSet,
    pub forms: QuadraticForms,
}

impl Instance {
    pub fn new(params: SystemParams, channels: ChannelSet) -> Result<Self> {
        channels.check_dims(params.antennas)?;
        let forms = QuadraticForms::build(&channels, &params)?;
        Ok(Self {
            params,
            channels,
            forms,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SchemeOutcome {
    pub r1: f64,
    pub r2: f64,
    pub sum: f64,
    pub iterations: usize,
    pub converged: bool,
    pub degenerate: bool,
    pub solution: Option<Solution>,
    pub bound: Option<BoundBreakdown>,
}

impl SchemeOutcome {
    fn from_solution(s: Solution) -> Self {
        Self {
            r1: s.rates.r1,
            r2: s.rates.r2,
            sum: s.rates.sum,
            iterations: s.iterations,
            converged: s.converged,
            degenerate: s.rates.degenerate,
            solution: Some(s),
            bound: None,
        }
    }
}

pub trait Scheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, instance: &Instance) -> Result<SchemeOutcome>;
}

/// Adapter running a [`Solver`] on the instance forms.
pub struct SolverScheme<S>(pub S);

impl<S: Solver> Scheme for SolverScheme<S> {
    fn name(&self) -> &'static str {
        self.0.name()
    }
    fn evaluate(&self, instance: &Instance) -> Result<SchemeOutcome> {
        self.0
            .solve(&instance.forms)
            .map(SchemeOutcome::from_solution)
    }
}

/// `R_UB`; the rate columns hold the two sub-rates at the optimum.
#[derive(Debug, Clone, Copy, Default)]
pub struct UpperBound(pub BoundConfig);

impl Scheme for UpperBound {
    fn name(&self) -> &'static str {
        "upper"
    }
    fn evaluate(&self, instance: &Instance) -> Result<SchemeOutcome> {
        let b = upper_bound::r_ub(&instance.channels, &instance.params, &self.0)?;
        Ok(SchemeOutcome {
            r1: b.r1_at_opt,
            r2: b.r2_at_opt,
            sum: b.r_ub,
            iterations: 0,
            converged: true,
            degenerate: false,
            solution: None,
            bound: Some(b),
        })
    }
}

/// Per-scheme settings used when building the default registry.
#[derive(Debug, Clone, Copy, Default)]
pub struct SchemeSettings {
    pub pia: PiaConfig,
    pub asa: AsaConfig,
    pub lss: LssConfig,
    pub bound: BoundConfig,
}

pub struct SchemeRegistry {
    entries: Vec<Box<dyn Scheme>>,
}

impl fmt::Debug for SchemeRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}

impl Default for SchemeRegistry {
    fn default() -> Self {
        Self::with_settings(&SchemeSettings::default())
    }
}

impl SchemeRegistry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn with_settings(s: &SchemeSettings) -> Self {
        let mut r = Self::empty();
        r.register(Box::new(SolverScheme(Pia(s.pia))));
        r.register(Box::new(SolverScheme(Asa(s.asa))));
        r.register(Box::new(SolverScheme(Lss(s.lss))));
        r.register(Box::new(SolverScheme(MaxSnr1)));
        r.register(Box::new(SolverScheme(MaxSinr2)));
        r.register(Box::new(SolverScheme(PureAmplification)));
        r.register(Box::new(UpperBound(s.bound)));
        r
    }

    /// Adds a scheme, replacing any entry with the same name in place.
    pub fn register(&mut self, scheme: Box<dyn Scheme>) {
        match self.entries.iter().position(|e| e.name() == scheme.name()) {
            Some(i) => self.entries[i] = scheme,
            None => self.entries.push(scheme),
        }
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn get(&self, name: &str) -> Result<&dyn Scheme> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    /// The named schemes in registry order, duplicates dropped.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<&dyn Scheme>> {
        for n in names {
            self.get(n.as_ref())?;
        }
        Ok(self
            .entries
            .iter()
            .filter(|e| names.iter().any(|n| n.as_ref() == e.name()))
            .map(|e| e.as_ref())
            .collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Scheme> {
        self.entries.iter().map(|e| e.as_ref())
    }
}
