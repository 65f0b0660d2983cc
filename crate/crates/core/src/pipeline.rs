//! Jobs: parsing, validation, the reduction pipeline and reports.

use std::collections::HashMap;

use rayon::prelude::*;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::derivation::{build_derived_sequences, primitive_rescale, DerivedSequence};
use crate::error::{Error, Result};
use crate::exact::rational::{dot, parse_rational, Rational};
use crate::exact::{CycloNumber, LatticeCharacter};
use crate::geometry::{free_superlattice, open_simplicial_decomposition, Cone, Lattice};
use crate::induced_character_decompose;
use crate::lin::Lin;
use crate::linalg::QVec;
use crate::numeric::{eval_cone_zeta, eval_z, EvalResult, SumOptions};
use crate::polylog::{regularize_limit, z_display, z_terms, ZExpression, ZTerm};
use crate::rewrite::unifactor::{lin_from_t, uni_factorize_t};
use crate::rewrite::{change_coordinates, convergence_check, integral_expression, integralize_forms, Integrand};
use crate::rewrite::{reduce_to_univariate, ReductionTrace, Reducer, UTerm};

pub const SCHEMA_VERSION: u32 = 1;

/// A matrix entry given either as a JSON integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Entry::Int(n) => Ok(Rational::from_integer((*n).into())),
            Entry::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSpec {
    pub modulus: u64,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct JobOptions {
    /// Verification tolerance is `10^-precision`.
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default)]
    pub trace: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_pieces")]
    pub max_pieces: usize,
}

fn default_precision() -> u32 {
    5
}

fn default_max_pieces() -> usize {
    256
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions { precision: default_precision(), trace: false, seed: 0, max_pieces: default_max_pieces() }
    }
}

/// `Σ_{x ∈ C⁰ ∩ Z^m} χ(x) / Π_i l_i(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct JobSpec {
    pub ambient_dim: usize,
    pub cone: Vec<Vec<i64>>,
    pub forms: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<CharacterSpec>,
    #[serde(default)]
    pub options: JobOptions,
}

/// A job after validation.
#[derive(Clone, Debug)]
pub struct ValidJob {
    pub cone: Cone,
    pub forms: Vec<QVec>,
    pub character: LatticeCharacter,
    pub warnings: Vec<String>,
}

impl JobSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serializes")
    }

    /// Simple constructor for integer data.
    pub fn new(cone: Vec<Vec<i64>>, forms: Vec<Vec<i64>>, character: Option<CharacterSpec>) -> Self {
        let m = cone.first().map_or(0, Vec::len);
        JobSpec {
            ambient_dim: m,
            cone,
            forms: forms.into_iter().map(|r| r.into_iter().map(Entry::Int).collect()).collect(),
            character,
            options: JobOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<ValidJob> {
        let m = self.ambient_dim;
        if m == 0 {
            return Err(Error::Validation("ambientDim must be positive".into()));
        }
        if self.cone.is_empty() || self.cone.iter().any(|g| g.len() != m) {
            return Err(Error::Validation(format!("cone generators must be nonempty rows of length {m}")));
        }
        if self.forms.is_empty() || self.forms.iter().any(|f| f.len() != m) {
            return Err(Error::Validation(format!("forms must be nonempty rows of length {m}")));
        }
        let cone = Cone::from_ints(&self.cone)?;
        if !cone.is_pointed() {
            return Err(Error::Validation("the cone is not pointed".into()));
        }
        let forms: Vec<QVec> =
            self.forms.iter().map(|f| f.iter().map(Entry::value).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let interior: QVec = (0..m).map(|i| cone.generators().iter().map(|g| g[i].clone()).sum()).collect();
        for (i, l) in forms.iter().enumerate() {
            if cone.generators().iter().any(|g| dot(l, g).is_negative()) || !dot(l, &interior).is_positive() {
                return Err(Error::Positivity(format!("form {} is not positive on the cone interior", i + 1)));
            }
        }
        let mut warnings = Vec::new();
        let lattice = Lattice::standard(m);
        let character = match &self.character {
            None => {
                warnings.push("no character given; using the trivial character".into());
                LatticeCharacter::trivial(lattice)
            }
            Some(c) => {
                if c.exponents.len() != m {
                    return Err(Error::Validation(format!("character needs {m} exponents")));
                }
                if c.modulus == 0 {
                    return Err(Error::Validation("character modulus must be positive".into()));
                }
                LatticeCharacter::new(lattice, c.modulus, c.exponents.clone())?
            }
        };
        Ok(ValidJob { cone, forms, character, warnings })
    }
}

/// Comparison of the symbolic value with direct summation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verification {
    pub numeric_symbolic: EvalResult,
    pub numeric_direct: EvalResult,
    pub difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Stats {
    pub pieces: usize,
    pub integrands: usize,
    pub sequences: usize,
    pub unifactor_terms: usize,
    pub p_terms: usize,
    pub symbols: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub symbolic_value: String,
    pub zeta: Vec<ZTerm>,
    pub numeric_symbolic: EvalResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    pub seed: u64,
    pub stats: Stats,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ReductionTrace>,
}

/// Output of the symbolic reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub value: ZExpression,
    pub stats: Stats,
    pub trace: Option<ReductionTrace>,
}

fn orthant(n: usize) -> Result<Cone> {
    Cone::from_ints(&(0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect::<Vec<_>>())
}

/// Per open piece: the integrands over the unit cube, with their coefficients.
pub fn piece_integrands(job: &ValidJob, max_pieces: usize) -> Result<(usize, Vec<Integrand>)> {
    let pieces = open_simplicial_decomposition(&job.cone)?;
    if pieces.len() > max_pieces {
        return Err(Error::Budget(format!("{} pieces exceed the limit {max_pieces}", pieces.len())));
    }
    // convergence first, before any rewriting
    for p in &pieces {
        if !convergence_check(p.cone.generators(), &job.forms) {
            return Err(Error::Divergent(format!(
                "the sum over the open cone spanned by {:?} diverges",
                p.cone.generators().iter().map(|g| g.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
            )));
        }
    }
    let mut out = Vec::new();
    for p in &pieces {
        let chi = job.character.restrict(&p.lattice)?;
        let fs = free_superlattice(&p.cone, &p.lattice)?;
        let psis = induced_character_decompose(&fs.lattice, &chi)?;
        let (scaled, s) = integralize_forms(&fs.generators, &job.forms);
        let coeff = CycloNumber::from_rational(Rational::new(s, (psis.len() as i64).into()));
        for psi in &psis {
            let mut i = integral_expression(&fs.generators, &scaled, psi)?;
            i.coefficient = coeff.clone();
            out.push(i);
        }
    }
    Ok((pieces.len(), out))
}

/// Runs the symbolic reduction of a validated job.
pub fn reduce_job(job: &ValidJob, options: &JobOptions) -> Result<Reduction> {
    let (np, integrands) = piece_integrands(job, options.max_pieces)?;
    let mut red = reduce_integrands(&integrands, job.forms.len(), options.trace)?;
    red.stats.pieces = np;
    Ok(red)
}

/// `Σ_I c_I ∫_{[0,1]^n} I Π dy_i/y_i` for integrands in `n` variables.
pub fn reduce_integrands(integrands: &[Integrand], n: usize, with_trace: bool) -> Result<Reduction> {
    let mut stats = Stats { integrands: integrands.len(), ..Stats::default() };
    let mut trace = with_trace.then(ReductionTrace::default);
    let cube = orthant(n)?;
    let mut seq_cache: HashMap<Vec<Vec<u32>>, Vec<DerivedSequence>> = HashMap::new();
    let mut terms: Lin<UTerm> = Lin::new();
    let mut keys = Vec::with_capacity(integrands.len());
    for integ in integrands {
        let key: Vec<Vec<u32>> = integ.factors.iter().map(|m| m.exps.clone()).collect();
        if !seq_cache.contains_key(&key) {
            let seqs = build_derived_sequences(&cube, &integ.exponent_forms())?;
            for s in &seqs {
                s.validate()?;
            }
            let rescaled: Vec<_> = seqs.iter().map(|s| primitive_rescale(s).1).collect();
            seq_cache.insert(key.clone(), rescaled);
        }
        stats.sequences += seq_cache[&key].len();
        keys.push(key);
    }
    // the rewriting of separate integrands is independent; results are merged in input order
    let parts: Vec<Vec<(DerivedSequence, CycloNumber, Lin<UTerm>)>> = integrands
        .par_iter()
        .zip(&keys)
        .map(|(integ, key)| {
            change_coordinates(integ, &seq_cache[key])?
                .into_iter()
                .map(|(seq, c, lin)| Ok((seq, c, lin_from_t(&uni_factorize_t(&lin)?))))
                .collect()
        })
        .collect::<Result<_>>()?;
    for (key, part) in keys.iter().zip(parts) {
        for (seq, c, uf) in part {
            if let Some(t) = trace.as_mut() {
                let gens: Vec<String> = seq
                    .flag
                    .cone
                    .generators()
                    .iter()
                    .map(|g| format!("({})", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                t.record(
                    "change_coordinates+uni_factorize",
                    "coordinate change and uni-factorization",
                    &format!("{:?} on {}", key, gens.join(" ")),
                    uf.iter().map(|(u, k)| format!("({k}) {u}")).collect(),
                    Some(c.to_string()),
                );
            }
            terms.add_scaled(&uf, &c);
        }
    }
    stats.unifactor_terms = terms.len();
    let mut reducer = Reducer::new(n);
    if trace.is_some() {
        reducer = reducer.with_trace();
    }
    let f = reduce_to_univariate(&terms, &mut reducer)?;
    stats.p_terms = f.num_terms();
    let value = regularize_limit(&f)?;
    stats.symbols = value.len();
    if let (Some(t), Some(r)) = (trace.as_mut(), reducer.trace.take()) {
        t.steps.extend(r.steps);
        t.truncated |= r.truncated;
        t.record("regularize_limit", "value at 1", &f, vec![z_display(&value)], None);
    }
    Ok(Reduction { value, stats, trace })
}

/// Direct numerical value of the job's sum.
pub fn direct_value(job: &ValidJob) -> Result<EvalResult> {
    eval_cone_zeta(&job.cone, &job.forms, &job.character, &SumOptions::default())
}

/// Compares a symbolic value with direct summation at tolerance `10^-precision`.
pub fn verify(value: &ZExpression, job: &ValidJob, precision: u32) -> Result<Verification> {
    let sym = eval_z(value)?;
    let direct = direct_value(job)?;
    let tolerance = 10f64.powi(-(precision as i32));
    let difference = (sym.value - direct.value).norm();
    let pass = difference <= tolerance + sym.error_bound + direct.error_bound && direct.error_bound <= tolerance;
    Ok(Verification { numeric_symbolic: sym, numeric_direct: direct, difference, tolerance, pass })
}

/// Validates, reduces and optionally verifies a job.
pub fn run(spec: &JobSpec, with_verification: bool) -> Result<Report> {
    let job = spec.validate()?;
    let red = reduce_job(&job, &spec.options)?;
    let numeric_symbolic = eval_z(&red.value)?;
    let verification = if with_verification { Some(verify(&red.value, &job, spec.options.precision)?) } else { None };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        symbolic_value: z_display(&red.value),
        zeta: z_terms(&red.value),
        numeric_symbolic,
        verification,
        seed: spec.options.seed,
        stats: red.stats,
        warnings: job.warnings,
        trace: red.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_job() {
        let spec = JobSpec::new(vec![vec![1]], vec![vec![1], vec![1]], None);
        let r = run(&spec, true).unwrap();
        assert!((r.numeric_symbolic.value.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        assert!(r.verification.unwrap().pass);
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn harmonic_job_is_divergent() {
        let spec = JobSpec::new(vec![vec![1]], vec![vec![1]], None);
        assert!(matches!(run(&spec, false), Err(Error::Divergent(_))));
    }

    #[test]
    fn job_json_roundtrip_and_unknown_fields() {
        let mut spec = JobSpec::new(vec![vec![1, 0], vec![0, 1]], vec![vec![1, 0], vec![1, 1], vec![1, 1]], None);
        spec.forms[0][0] = Entry::Text("1/1".into());
        let back = JobSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
        assert!(JobSpec::from_json(r#"{"ambientDim":1,"cone":[[1]],"forms":[[1]],"bogus":1}"#).is_err());
        let neg = JobSpec::new(vec![vec![1, 0], vec![0, 1]], vec![vec![1, -1], vec![1, 1]], None);
        assert!(matches!(neg.validate(), Err(Error::Positivity(_))));
        assert!(Error::Positivity(String::new()).code() == "POSITIVITY");
    }
}
