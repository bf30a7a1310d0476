use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "zk",
    version,
    about = "Exact commutative algebra from the command line",
    long_about = "Exact commutative algebra from the command line.\n\n\
        Polynomial flags take infix text (`X^2*Y - 3`), a JSON term list, or @file.\n\
        Variables come from --vars, or are inferred in order of first appearance.\n\
        Sign convention for twists: O(-1) is glued by X and O(1) by 1/X, so the glue of O(d) is X^-d.\n\n\
        Exit codes: 0 success/true, 1 false, 2 usage error, 3 computation error."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Base field: Q or Fp:<prime>
    #[arg(long, global = true, env = "ZK_FIELD")]
    pub field: Option<String>,
    /// Term order: grevlex, lex or block:<k>
    #[arg(long, global = true, env = "ZK_ORDER")]
    pub order: Option<String>,
    /// Bound on enumerated grids (points, elements, homomorphisms)
    #[arg(long, global = true, env = "ZK_CAP")]
    pub cap: Option<u64>,
    /// Exponent search bound for ideal patching
    #[arg(long = "sat-bound", global = true, env = "ZK_SAT_BOUND")]
    pub sat_bound: Option<u32>,
    /// Extra multidegree window margin for pn-cohomology
    #[arg(long, global = true, env = "ZK_MARGIN")]
    pub margin: Option<u32>,
    /// Worker threads
    #[arg(long, global = true, env = "ZK_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, env = "ZK_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// JSON file with defaults for the options above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Comma-separated variable names
    #[arg(long, global = true)]
    pub vars: Option<String>,
    /// Add wall-clock time to the report
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Groebner basis
    Gb(IdealArgs),
    /// Ideal membership
    Member(MemberArgs),
    /// Membership in the radical
    RadicalMember(MemberArgs),
    /// Whether the functions generate the unit ideal modulo the ideal
    Unimodular(UnimodularArgs),
    /// Dimension of the quotient as a vector space
    Kdim(IdealArgs),
    /// Whether multiplication by f is injective on the quotient
    Regular(MemberArgs),

    /// Create or inspect algebra documents
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Check a homomorphism given by generator images
    Hom(HomArgs),
    /// Tensor (or fiber) product of two algebras
    Tensor(TensorArgs),
    /// Localization A_f
    Localize(LocalizeArgs),
    /// Rational points over a prime field
    SpecPoints(AlgebraFile),
    /// External roundtrip check for a presentation
    SqcRoundtrip(SqcArgs),

    /// D(f..) ⊆ D(g..)
    OpenContained(ContainArgs),
    /// V(f..) ⊆ V(g..), ideal-theoretically
    ClosedContained(ContainArgs),
    /// Patch local ideals on a unimodular cover
    PatchIdeals(FamilyArg),
    /// Split a unit on an overlap of two cofinite opens of the affine line
    SplitUnit(SplitUnitArgs),
    /// Merge local sections into one
    MergeSections(SectionsArg),
    /// Trivialize a pointed cocycle
    TrivializeCocycle(CocycleArg),

    /// Split a 1-cocycle on a unimodular cover
    SplitCocycle(CocycleArg),
    /// Cohomology dimensions of an explicit complex
    CechDims(ComplexArg),

    /// dim H^q(P^n, O(d))
    PnCohomology(PnArgs),
    /// Write a Laurent unit as alpha*X^n
    ClassifyUnit(UnitArgs),
    /// Glue unit and degree of O(d), optionally tensored with more twists
    Twist(TwistArgs),

    /// Run a directory of case files
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct IdealArgs {
    /// Generators, e.g. '[X - Y, Y^2]'
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: String,
}

#[derive(Args, Debug)]
pub struct MemberArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub ideal: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
}

#[derive(Args, Debug)]
pub struct UnimodularArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "[]")]
    pub ideal: String,
    #[arg(long, allow_hyphen_values = true)]
    pub fs: String,
    /// Include coefficients r with Σ r_i f_i = 1
    #[arg(long)]
    pub certificate: bool,
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Build an algebra document from relations
    New(AlgebraNewArgs),
    /// Describe an algebra document
    Show(AlgebraFile),
}

#[derive(Args, Debug)]
pub struct AlgebraNewArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "[]")]
    pub relations: String,
    /// Write the document here as well
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AlgebraFile {
    /// Algebra document (path or inline JSON)
    #[arg(long)]
    pub algebra: String,
}

#[derive(Args, Debug)]
pub struct HomArgs {
    #[arg(long)]
    pub source: String,
    #[arg(long)]
    pub target: String,
    /// Images of the source generators, in the target's variables
    #[arg(long, allow_hyphen_values = true)]
    pub images: String,
}

#[derive(Args, Debug)]
pub struct TensorArgs {
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
    /// Common base algebra C for a fiber product
    #[arg(long, requires_all = ["left_images", "right_images"])]
    pub over: Option<String>,
    /// Images of C's generators in the left factor
    #[arg(long, allow_hyphen_values = true)]
    pub left_images: Option<String>,
    /// Images of C's generators in the right factor
    #[arg(long, allow_hyphen_values = true)]
    pub right_images: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LocalizeArgs {
    #[arg(long)]
    pub algebra: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SqcArgs {
    /// Presentation as an algebra document; otherwise --relations with --vars
    #[arg(long, conflicts_with = "relations")]
    pub algebra: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub relations: Option<String>,
    /// Stage algebra (default: the base field)
    #[arg(long)]
    pub stage: Option<String>,
    /// Test stages (default: F_q and F_q[t]/(t^2))
    #[arg(long)]
    pub family: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ContainArgs {
    /// Ambient algebra document (default: polynomial ring on the variables)
    #[arg(long)]
    pub ambient: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
}

/// Documents are given as a path or as inline JSON.
#[derive(Args, Debug)]
pub struct FamilyArg {
    /// {"cover": [..], "locals": [[fraction..]..], "vars" | "ambient"}
    #[arg(long)]
    pub family: String,
}

#[derive(Args, Debug)]
pub struct SectionsArg {
    /// {"pieces": [[root..]..], "transitions": {"i,j": unit}}
    #[arg(long)]
    pub sections: String,
}

#[derive(Args, Debug)]
pub struct CocycleArg {
    #[arg(long)]
    pub cocycle: String,
}

#[derive(Args, Debug)]
pub struct ComplexArg {
    /// {"dims": [..], "maps": [[[entry..]..]..]}
    #[arg(long)]
    pub complex: String,
}

#[derive(Args, Debug)]
pub struct SplitUnitArgs {
    /// Removed points of both pieces, comma-separated
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    pub shared: String,
    /// Removed points of U only
    #[arg(long = "u-only", allow_hyphen_values = true, default_value = "")]
    pub u_only: String,
    /// Removed points of V only
    #[arg(long = "v-only", allow_hyphen_values = true, default_value = "")]
    pub v_only: String,
    /// Factored unit {"unit": .., "roots": [[a, e], ..]}
    #[arg(long, conflicts_with_all = ["num", "den"])]
    pub unit: Option<String>,
    /// Numerator, factored over the field
    #[arg(long, allow_hyphen_values = true)]
    pub num: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub den: String,
}

#[derive(Args, Debug)]
pub struct PnArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "table")]
    pub d: Option<i64>,
    /// Range dmin..dmax
    #[arg(long, allow_hyphen_values = true, conflicts_with = "d")]
    pub table: Option<String>,
}

#[derive(Args, Debug)]
pub struct UnitArgs {
    /// Laurent polynomial, e.g. '3*X^-2'
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    #[arg(long, default_value = "X")]
    pub var: String,
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub d: i64,
    /// Further twists to tensor with
    #[arg(long, allow_negative_numbers = true)]
    pub tensor: Vec<i64>,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    pub dir: PathBuf,
}
