//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "idealab", version, about = "Ideal approximation computations over finite algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Workspace JSON file.
    #[arg(long, global = true)]
    pub workspace: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Restrict the universe to these workspace objects (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    pub universe: Option<Vec<String>>,
    /// Record wall-clock time in the report (makes reports differ across runs).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpArg {
    Sum,
    Meet,
    Compose,
    Colon,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Formula,
    Search,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ideal calculus.
    Ideal {
        #[command(subcommand)]
        verb: IdealVerb,
    },
    /// Torsion pairs, approximations and preradicals.
    Torsion {
        #[command(subcommand)]
        verb: TorsionVerb,
    },
    /// Weak kernel-cokernel and weak exact structures.
    Wkc {
        #[command(subcommand)]
        verb: WkcVerb,
    },
    /// Stable categories of self-injective algebras.
    Stable {
        #[command(subcommand)]
        verb: StableVerb,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        verb: VerifyVerb,
    },
}

#[derive(Args, Debug, Clone)]
pub struct One {
    #[arg(short = 'i', long = "ideal")]
    pub ideal: String,
}

#[derive(Args, Debug, Clone)]
pub struct Two {
    #[arg(short = 'i', long = "ideal")]
    pub first: String,
    #[arg(short = 'j', long = "with")]
    pub second: String,
}

#[derive(Args, Debug, Clone)]
pub struct MapArg {
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    /// Row-major JSON matrix, e.g. `[[2]]`.
    #[arg(long)]
    pub matrix: String,
}

#[derive(Subcommand, Debug)]
pub enum IdealVerb {
    /// Left or right annihilator.
    Ann {
        #[arg(long, value_enum)]
        side: SideArg,
        #[command(flatten)]
        ideal: One,
    },
    Sum(Two),
    Meet(Two),
    Prod(Two),
    /// `ℓ(I : J)` or `r(I : J)`.
    Conductor {
        #[arg(long, value_enum)]
        side: SideArg,
        #[command(flatten)]
        ideals: Two,
    },
    /// Membership of one morphism.
    Member {
        #[command(flatten)]
        ideal: One,
        #[command(flatten)]
        map: MapArg,
    },
    /// `Ob(I)` and whether `I` is an object ideal.
    Objects(One),
}

#[derive(Subcommand, Debug)]
pub enum TorsionVerb {
    /// The torsion pair generated by an ideal and its torsion sequences.
    Generate(One),
    /// The four Salce clauses at every object, or on a replayed sequence.
    Salce {
        #[command(flatten)]
        ideal: One,
        /// Replace the deflation at this object by zero.
        #[arg(long)]
        corrupt: Option<String>,
        /// JSON file `{inflation, deflation}` to evaluate instead.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Minimality of the torsion inclusion and free projection at an object.
    Cover {
        #[command(flatten)]
        ideal: One,
        #[arg(long)]
        object: String,
    },
    /// The trace preradical: values, naturality, left exactness.
    Preradical(One),
    /// Preradical formulas against the ideal-level constructions.
    Combine {
        #[command(flatten)]
        ideals: Two,
        #[arg(long, value_enum)]
        op: OpArg,
    },
    /// Idempotent and radical flags against object-ideal sides.
    Classify(One),
}

#[derive(Subcommand, Debug)]
pub enum WkcVerb {
    /// Axiom findings for a conflation set: `ses`, `split`, `stable` or a workspace set.
    Verify {
        #[arg(long, default_value = "ses")]
        set: String,
        /// Engineer a violation first: `we1`, `we2` or `we3`.
        #[arg(long)]
        violate: Option<String>,
    },
    /// Weak pullback of a listed deflation along a map into its codomain.
    Pullback {
        #[arg(long, default_value = "ses")]
        set: String,
        /// Index of the conflation whose deflation is pulled back.
        #[arg(long)]
        index: usize,
        /// Domain label of the map (a closure object such as `R` or `R+S`).
        #[arg(long)]
        from: String,
        #[arg(long)]
        matrix: String,
    },
    /// The weak extension ideal of two ideals.
    Diamond {
        #[command(flatten)]
        ideals: Two,
        #[arg(long, value_enum, default_value_t = ModeArg::Formula)]
        mode: ModeArg,
        /// Conflations for search mode: `ses` or a workspace set.
        #[arg(long, default_value = "ses")]
        set: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum StableVerb {
    /// Baer test for self-injectivity.
    Selfinj,
    /// The stable Hom group.
    Hom {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The shift of an object and its inverse.
    Sigma {
        #[arg(long)]
        object: String,
    },
    /// `Ext(A, B)` against the count of extension classes.
    Ext {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Ext-orthogonality of two ideals, or of a replayed pair of maps.
    Orth {
        #[arg(short = 'i', long = "ideal")]
        first: Option<String>,
        #[arg(short = 'j', long = "with")]
        second: Option<String>,
        /// JSON file `{first, second}` to evaluate instead.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Ext-special precover of an object.
    Special {
        #[command(flatten)]
        ideal: One,
        #[arg(long)]
        object: String,
    },
    /// Completeness transfer for an Ext-orthogonal pair.
    Transfer(Two),
}

#[derive(Subcommand, Debug)]
pub enum VerifyVerb {
    /// Every suite that applies to the workspace.
    All,
}
