use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixdisc::derivatives::DerivativeMethod;
use mixdisc::Complex64;

#[derive(Debug, Parser)]
#[command(name = "mixdisc", version, about = "Exact and approximate mixed discriminants")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "MIXDISC_THREADS")]
    pub threads: Option<usize>,
    /// Leave the `timing` field out of the output document.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact mixed discriminant, permanent or principal-minor power sum.
    Exact(ExactArgs),
    /// Approximate ln D(I + z_1 Q_1, ..., I + z_n Q_n) for ‖Q_k‖ <= 0.045, |z_k| <= rho.
    Approx(ApproxArgs),
    /// Doubly stochastic tuples.
    Ds {
        #[command(subcommand)]
        action: DsAction,
    },
    /// Mixed characteristic polynomial and its root-bound check.
    Charpoly(CharpolyArgs),
    /// Approximate ln Σ_S (det B_S)^m for ‖B‖ < rho.
    Minors(MinorsArgs),
    /// Sample exact values inside a zero-free region.
    Verify {
        #[command(subcommand)]
        region: VerifyRegion,
    },
    /// Write a seeded instance file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Taylor degree and timing sweep over n.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactMode {
    /// D(A_1, ..., A_n) by polarization.
    MixedDiscriminant,
    /// The same value from the (n!)^2 permutation sum (n <= 5).
    Permutations,
    /// Permanent of the first matrix.
    Permanent,
    /// Σ_S (det B_S)^m of the first matrix.
    Minors,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub tuple: PathBuf,
    #[arg(long, value_enum, default_value = "mixed-discriminant")]
    pub mode: ExactMode,
    /// Power for `--mode minors`.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Method {
    /// One characteristic polynomial per subset of size at most the order.
    #[default]
    Polarization,
    /// Every padded mixed discriminant expanded over principal windows.
    Subsets,
}

impl From<Method> for DerivativeMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Polarization => DerivativeMethod::TruncatedPolarization,
            Method::Subsets => DerivativeMethod::SubsetEnumeration,
        }
    }
}

#[derive(Debug, Args)]
pub struct MethodArg {
    /// How derivatives at 0 are computed.
    #[arg(long, value_enum, default_value = "polarization")]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[arg(long)]
    pub tuple: PathBuf,
    /// Overrides `eps` from the file.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Overrides `rho` from the file.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Also evaluate the exact value (n <= 14).
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub method: MethodArg,
}

/// `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        match s.split_once(',') {
            Some((re, im)) => Ok(Self(Complex64::new(parse(re)?, parse(im)?))),
            None => Ok(Self(Complex64::new(parse(s)?, 0.0))),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum DsAction {
    /// Check Σ Q_k = I, tr Q_k = 1 and Q_k >= 0.
    Validate {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Scale a positive definite tuple to A_k = ξ_k T Q_k T.
    Scale {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Approximate ln D(I + z Q_1, ..., I + z Q_n) for |z| < α0 n / 4.
    Approx {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexArg,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        method: MethodArg,
    },
    /// Approximate ln D((1-γ) I/n + γ X_k) for γ / (1-γ) < α0 / 4.
    Contract {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        method: MethodArg,
    },
}

#[derive(Debug, Args)]
pub struct CharpolyArgs {
    #[arg(long)]
    pub tuple: PathBuf,
    /// Also check that all roots are real and lie in [0, (1 + sqrt(eps_trace))^2].
    #[arg(long)]
    pub mss: bool,
    /// Trace bound for `--mss` (default: the largest trace).
    #[arg(long)]
    pub eps_trace: Option<f64>,
    #[command(flatten)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct MinorsArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Points per sample (polydisc), or radii and angles per sample (ds, minors).
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sampling {
    Boundary,
    Mixed,
}

#[derive(Debug, Subcommand)]
pub enum VerifyRegion {
    /// ‖Q_k‖ <= γ0 and |z_k| <= 1.
    Polydisc {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, value_enum, default_value = "boundary")]
        sampling: Sampling,
    },
    /// Doubly stochastic Q and |z| < α0 n / 4.
    Ds {
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// ‖B‖ < 1 and |z| <= 1.
    Minors {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Q_k with ‖Q_k‖ <= γ0 and points in the disc of radius rho.
    Polydisc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.9)]
        rho: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A doubly stochastic tuple.
    Ds {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A positive definite tuple.
    Pd {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// m positive semidefinite matrices summing to I.
    Decomposition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One matrix with operator norm at most `bound`.
    Matrix {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        bound: f64,
        #[arg(long)]
        complex: bool,
        #[arg(long, default_value_t = 0.6)]
        rho: f64,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dimensions to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![4, 8, 16])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    /// Compute at most this many derivative orders per instance.
    #[arg(long)]
    pub max_orders: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub method: MethodArg,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn complex_arguments() {
        assert_eq!("0.5".parse::<ComplexArg>().unwrap().0, Complex64::new(0.5, 0.0));
        assert_eq!("-0.1, 0.2".parse::<ComplexArg>().unwrap().0, Complex64::new(-0.1, 0.2));
        assert!("x".parse::<ComplexArg>().is_err());
    }
}
