use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "a1", version, about = "Exact Grothendieck-Witt arithmetic and enriched degrees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit a JSON report (schema 1) instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include Gram matrices, bases and other provenance.
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArg {
    /// Field descriptor: Q, R, F5, F25, Q(a):a^2-2, Q(z), Q((t;2;16)), ...
    #[arg(long, default_value = "Q")]
    pub field: String,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArg {
    /// Polynomials of the system; repeat the flag or separate with `;` or `,`.
    #[arg(long = "system", visible_alias = "f", required = true, allow_hyphen_values = true)]
    pub system: Vec<String>,
    /// Variable order, e.g. `x1,x2`; inferred from the polynomials otherwise.
    #[arg(long)]
    pub vars: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct PointArg {
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Field containing the coordinates (an extension of --field).
    #[arg(long)]
    pub point_field: Option<String>,
    #[arg(long, default_value_t = a1_core::local_algebra::DEFAULT_MAX_ORDER)]
    pub max_order: u32,
}

#[derive(Args, Debug, Clone)]
pub struct HypersurfaceArg {
    /// The polynomial f.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub f: String,
    /// Variable order, e.g. `x1,x2`; inferred otherwise.
    #[arg(long)]
    pub vars: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical form and invariants of a GW class, e.g. "<2> + 3<-1>".
    GwSimplify {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Decides equality of two GW classes (exit 2 on False, 3 on Unknown).
    GwEqual {
        #[command(flatten)]
        field: FieldArg,
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Transfer Tr_{L/K} of a class over L = --field.
    Transfer {
        #[command(flatten)]
        field: FieldArg,
        /// Target field; the immediate parent of --field by default.
        #[arg(long)]
        to: Option<String>,
        #[arg(allow_hyphen_values = true)]
        class: String,
    },
    /// Local A1-degree of a square system at a zero.
    DegreeLocal {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// Degree of the pointed map A/B of P1 as a Bezout form.
    DegreeP1 {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, allow_hyphen_values = true)]
        num: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        den: String,
        /// Also compute the fiber sum over this value (finite fields).
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        #[arg(long, default_value_t = a1_core::degree::DEFAULT_MAX_EXT)]
        max_ext: usize,
    },
    /// Fiber sum of local degrees over a finite field; scans all values
    /// when --value is absent.
    DegreeGlobal {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        system: SystemArg,
        #[arg(long, allow_hyphen_values = true)]
        value: Option<String>,
        #[arg(long, default_value_t = a1_core::degree::DEFAULT_MAX_EXT)]
        max_ext: usize,
        /// Maximum number of values to scan.
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Local algebra of a system at a zero.
    LocalAlgebra {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        system: SystemArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// A1-Milnor number of f at a critical point.
    Milnor {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        f: HypersurfaceArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// Classification of a point of {f = 0} and the type of a node.
    NodeType {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        f: HypersurfaceArg,
        #[command(flatten)]
        point: PointArg,
    },
    /// Compares the sum of Milnor numbers of f with the sum of node types of
    /// sampled linear perturbations over a finite field.
    VerifyCor45 {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        f: HypersurfaceArg,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = a1_core::degree::DEFAULT_MAX_EXT)]
        max_ext: usize,
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Explicit perturbations `a1,a2;b1,b2;...` instead of sampling.
        #[arg(long, allow_hyphen_values = true)]
        values: Option<String>,
    },
    /// Lifts critical-point branches of f + t g and checks the bifurcation
    /// identity at a singular point.
    Bifurcate {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        f: HypersurfaceArg,
        /// The deformation direction g (may involve t).
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Branch seed, e.g. "x1: t^(1/2)*-1; x2: -t"; repeat per branch.
        #[arg(long = "seed", required = true, allow_hyphen_values = true)]
        seeds: Vec<String>,
        #[arg(long, default_value_t = a1_core::puiseux::DEFAULT_PRECISION)]
        precision: i64,
        /// The singular point; the origin by default.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Minimal polynomial of a coefficient extension, e.g. "c^2-3".
        #[arg(long)]
        ext: Option<String>,
    },
    /// Runs the bundled regression corpus.
    Corpus,
}
