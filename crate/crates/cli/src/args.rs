use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mrd_core::EquivalenceMode;

/// Rank-metric MRD codes, quasifields and semifields over small finite fields.
///
/// Codes, quasifield tables, forms and witnesses are read and written as
/// canonical JSON. Exit status is 0 on success, 1 when a check fails, and 2
/// on a usage or input error; errors are reported on stderr as JSON.
#[derive(Debug, Parser)]
#[command(name = "mrd", version)]
pub struct Cli {
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, env = "MRD_WORKERS", default_value_t = 1)]
    pub workers: usize,

    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    /// Write a run manifest (inputs, digests, timing) to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a code or quasifield.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a property of a code or quasifield table.
    #[command(subcommand)]
    Verify(Verify),
    /// Summarize a code (rank distribution, distance) or a table (nuclei, kernel, center).
    Invariants { input: PathBuf },
    /// Exhaustive classification and comparison.
    #[command(subcommand)]
    Classify(Classify),
    /// Test two codes for equivalence and print a witness.
    Equiv(EquivArgs),
    /// Test two quasifields for isotopy and print the isotopism.
    Isotopy(IsotopyArgs),
    /// Dual code under the trace pairing.
    Dual { input: PathBuf },
    /// Invariant symmetric forms and symmetric codes.
    #[command(subcommand)]
    Symmetric(Symmetric),
    /// Run a named computation end to end and compare with the expected values.
    Reproduce {
        /// One of ex16-classes, sec6-classes, sec6-rankdist, sl25, knarr-16, dual-27.
        claim: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Gabidulin code of dimension k in m×n matrices over GF(q).
    Gabidulin {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Field-multiplication (Singer) code of GF(q^n) over GF(q).
    Singer {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// Dickson nearfield N(n, q) as a multiplication table.
    Dickson {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// The nearfield of order 121 with multiplicative group SL(2,5).
    #[command(name = "exceptional-11")]
    Exceptional11 {
        /// Emit the quasifield table instead of the code.
        #[arg(long)]
        table: bool,
    },
    /// Embedded data: code2, code3, sec6_G_basis, sec6_C_basis, sl25_generators.
    Fixture { name: String },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Singleton bound test: |C| = q^(km) and d = n-k+1.
    Mrd { code: PathBuf },
    /// Quasifield axioms of a multiplication table.
    Quasifield { table: PathBuf },
    /// Quasifield axioms plus left distributivity.
    Semifield { table: PathBuf },
    /// Quasifield axioms plus associativity.
    Nearfield { table: PathBuf },
    /// Additive closure ⇔ semifield and linearity ⇔ division algebra, for a normalized d = n code.
    Correspondence { code: PathBuf },
    /// Re-apply a witness and compare the image with the target code.
    Witness { source: PathBuf, target: PathBuf, witness: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum Classify {
    /// Representatives of the equivalence classes of MRD codes in n×n matrices over GF(q) with distance d.
    Codes(ClassifyCodes),
    /// Semifields of order p^n up to isomorphism, with isotopy classes.
    Semifields {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: usize,
    },
    /// Same as the top-level `equiv`.
    Equiv(EquivArgs),
    /// Same as the top-level `isotopy`.
    Isotopy(IsotopyArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyCodes {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "linear", value_parser = parse_mode)]
    pub mode: EquivalenceMode,
    /// Stop after this many search nodes; the manifest then carries a resume token.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Continue from the resume token in a manifest written by an interrupted run.
    #[arg(long)]
    pub resume: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, default_value = "linear", value_parser = parse_mode)]
    pub mode: EquivalenceMode,
}

#[derive(Debug, Args)]
pub struct IsotopyArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Order of the common kernel subfield (default: the prime field).
    #[arg(long)]
    pub kernel_order: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Symmetric {
    /// Search for an invariant non-degenerate symmetric form on a quasifield.
    FindForm {
        table: PathBuf,
        /// Work over the kernel instead of the prime field.
        #[arg(long)]
        kernel: bool,
    },
    /// The Gram matrices of tr(a·x·y) over GF(q^n)/GF(q), plus zero, as a code.
    Build {
        /// q and n.
        #[arg(long, num_args = 2, value_names = ["Q", "N"])]
        field: Vec<u32>,
        /// Emit only the trace form.
        #[arg(long)]
        form: bool,
    },
}

fn parse_mode(s: &str) -> Result<EquivalenceMode, String> {
    s.parse().map_err(|e: mrd_core::Error| e.to_string())
}
