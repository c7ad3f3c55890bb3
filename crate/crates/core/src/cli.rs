//! Command-line front end.
//!
//! Exit status: 0 success, 1 invalid data, 2 I/O failure, 64 bad usage.

use std::collections::HashMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphmatch::{combined_score, gm_score, proximity_matrix, DEFAULT_T};
use crate::izr::{izr_refine, plan, PadPolicy, TargetAspect};
use crate::merge::top_down_merge;
use crate::metrics::{evaluate, MetricOptions, PartTally};
use crate::ontology::{LabelSet, Ontology};
use crate::raster::{netpbm, BBox, ScoreMap, StructuringElement};
use crate::relabel::{relabel, FactoredMaps, SideScores};
use crate::render::render_to_file;
use crate::synth::gen_synthetic;

pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "factorseg", version, about = "Factorized part label-map tooling")]
pub struct Cli {
    /// Ontology file, or a name looked up in $FLOAT_ONTOLOGY_DIR and the
    /// shipped set (pp58, pp108, pp201).
    #[arg(long, global = true, default_value = "pp201")]
    pub ontology: String,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// Seed for the synthetic scene generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a monolithic ground-truth map into the five factored maps.
    Relabel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Merge factored maps into a monolithic map.
    Merge {
        #[arg(long)]
        maps: PathBuf,
        #[command(flatten)]
        scores: ScoreArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Refine each object with per-crop maps and composite the result.
    Izr {
        #[arg(long)]
        maps: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        margin: f64,
        #[arg(long, value_enum, default_value_t = AspectArg::Image)]
        aspect: AspectArg,
        /// Directory with manifest.json binding crop boxes to map directories.
        #[arg(long, required_unless_present = "plan")]
        crops_from: Option<PathBuf>,
        /// Write the crop boxes that refinement needs and stop.
        #[arg(long, conflicts_with = "crops_from")]
        plan: Option<PathBuf>,
        #[arg(long, required_unless_present = "plan")]
        out: Option<PathBuf>,
    },
    /// Score predictions against ground truth.
    Eval {
        /// JSON list of {"gt": path, "pred": path}.
        #[arg(long)]
        pairs: PathBuf,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Count parts absent from every ground truth as 0.
        #[arg(long)]
        zero_absent: bool,
    },
    /// Proximity matrix of a label map.
    Proximity {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph-matching score between two maps.
    Gmscore {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[command(flatten)]
        graph: GraphArgs,
        /// Print pixel error + 0.1 * graph score instead.
        #[arg(long)]
        combined: bool,
    },
    /// Colorize a label map as PPM.
    Render {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = LabelSetArg::Monolithic)]
        labelset: LabelSetArg,
    },
    /// Validate an ontology and print its label-space sizes.
    ValidateOntology {
        /// Defaults to --ontology.
        path: Option<String>,
    },
    /// Write a seeded synthetic ground-truth map.
    Synth {
        #[arg(long, default_value_t = 128)]
        width: usize,
        #[arg(long, default_value_t = 128)]
        height: usize,
        #[arg(long, default_value_t = 4)]
        objects: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Left/right confidences (JSON score file).
    #[arg(long, requires = "fb_scores")]
    pub lr_scores: Option<PathBuf>,
    /// Front/back confidences (JSON score file).
    #[arg(long, requires = "lr_scores")]
    pub fb_scores: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long = "T", default_value_t = DEFAULT_T)]
    pub t: u32,
    #[arg(long, value_enum, default_value_t = ShapeArg::Square)]
    pub shape: ShapeArg,
    #[arg(long, value_enum, default_value_t = LabelSetArg::Monolithic)]
    pub labelset: LabelSetArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AspectArg {
    Image,
    Box,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Square,
    Diamond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LabelSetArg {
    Object,
    Animate,
    Inanimate,
    Lr,
    Fb,
    Monolithic,
}

impl From<LabelSetArg> for LabelSet {
    fn from(a: LabelSetArg) -> LabelSet {
        match a {
            LabelSetArg::Object => LabelSet::Object,
            LabelSetArg::Animate => LabelSet::AnimateRoot,
            LabelSetArg::Inanimate => LabelSet::InanimateRoot,
            LabelSetArg::Lr => LabelSet::LeftRight,
            LabelSetArg::Fb => LabelSet::FrontBack,
            LabelSetArg::Monolithic => LabelSet::Monolithic,
        }
    }
}

impl From<ShapeArg> for StructuringElement {
    fn from(a: ShapeArg) -> StructuringElement {
        match a {
            ShapeArg::Square => StructuringElement::Square,
            ShapeArg::Diamond => StructuringElement::Diamond,
        }
    }
}

/// On-disk side confidences: pixel-major scores over `labels`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ScoreFile {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u16>,
    pub scores: Vec<f32>,
}

impl ScoreFile {
    pub fn read(path: &Path) -> Result<ScoreMap> {
        let f: ScoreFile = read_json(path)?;
        ScoreMap::new(f.width, f.height, f.labels, f.scores)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PairEntry {
    pub gt: PathBuf,
    pub pred: PathBuf,
}

/// One entry of an IZR crop manifest.
#[derive(Debug, Serialize, Deserialize)]
pub struct CropEntry {
    pub bbox: BBox,
    /// Directory (relative to the manifest) holding the crop's maps.
    pub maps: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
}

pub const CROP_MANIFEST: &str = "manifest.json";
pub const LR_SCORES_FILE: &str = "lr_scores.json";
pub const FB_SCORES_FILE: &str = "fb_scores.json";

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&bytes)
        .map_err(|source| Error::Json { context: path.display().to_string(), source })
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn relative_to(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    if let Command::ValidateOntology { path } = &cli.command {
        let o = Ontology::resolve(path.as_deref().unwrap_or(&cli.ontology))?;
        println!("version: {}", o.version());
        println!("categories: {}", o.categories().len());
        for set in LabelSet::ALL {
            println!("{} labels: {}", set.name(), o.label_set_size(set));
        }
        println!("side decoder: {}", if o.has_side_decoder() { "yes" } else { "no" });
        println!("output heads: {}", o.output_head_count());
        return Ok(());
    }
    let o = Ontology::resolve(&cli.ontology)?;
    match &cli.command {
        Command::Relabel { input, out_dir } => {
            let gt = netpbm::read_pgm(input, LabelSet::Monolithic)?;
            relabel(&gt, &o)?.write_dir(out_dir)
        }
        Command::Merge { maps, scores, out } => {
            let mut f = FactoredMaps::read_dir(maps)?;
            if let (Some(lr), Some(fb)) = (&scores.lr_scores, &scores.fb_scores) {
                f.side_scores = Some(SideScores { lr: ScoreFile::read(lr)?, fb: ScoreFile::read(fb)? });
            }
            netpbm::write_pgm(out, &top_down_merge(&f, &o)?)
        }
        Command::Izr { maps, margin, aspect, crops_from, plan: plan_out, out } => {
            if !(*margin >= 0.0 && margin.is_finite()) {
                return Err(Error::InvalidArgument(format!("margin {margin} must be >= 0")));
            }
            let policy = PadPolicy {
                margin: *margin,
                target_aspect: match aspect {
                    AspectArg::Image => TargetAspect::ImageAspect,
                    AspectArg::Box => TargetAspect::PreserveBox,
                },
            };
            let f = FactoredMaps::read_dir(maps)?;
            if let Some(plan_out) = plan_out {
                let entries: Vec<CropEntry> = plan(&f.s_o, policy)
                    .into_iter()
                    .enumerate()
                    .map(|(i, (c, b))| CropEntry {
                        bbox: b,
                        maps: PathBuf::from(format!("crop_{i:03}")),
                        category: o.object_name(c.category).map(str::to_owned),
                    })
                    .collect();
                let json = serde_json::to_string_pretty(&entries).expect("serializable plan");
                return write_file(plan_out, json + "\n");
            }
            let crops_dir = crops_from.as_ref().expect("clap enforces --crops-from");
            let entries: Vec<CropEntry> = read_json(&crops_dir.join(CROP_MANIFEST))?;
            let by_box: HashMap<BBox, PathBuf> =
                entries.into_iter().map(|e| (e.bbox, relative_to(crops_dir, &e.maps))).collect();
            let refined = izr_refine(
                &f,
                &o,
                |b| {
                    let dir = by_box.get(&b).ok_or(Error::MissingCrop(b))?;
                    read_crop(dir)
                },
                policy,
            )?;
            netpbm::write_pgm(out.as_ref().expect("clap enforces --out"), &refined)
        }
        Command::Eval { pairs, out, zero_absent } => {
            let entries: Vec<PairEntry> = read_json(pairs)?;
            let base = pairs.parent().unwrap_or(Path::new(""));
            let n = o.label_set_size(LabelSet::Monolithic);
            let tallies: Vec<PartTally> = entries
                .par_iter()
                .map(|e| {
                    let gt = netpbm::read_pgm(relative_to(base, &e.gt), LabelSet::Monolithic)?;
                    let pred = netpbm::read_pgm(relative_to(base, &e.pred), LabelSet::Monolithic)?;
                    PartTally::of_image(&pred, &gt, n)
                })
                .collect::<Result<_>>()?;
            let mut total = PartTally::new(n);
            for t in &tallies {
                total.merge(t);
            }
            let report = evaluate(&total, &o, MetricOptions { zero_absent: *zero_absent })?.to_json();
            match out {
                Some(p) => write_file(p, report),
                None => {
                    print!("{report}");
                    Ok(())
                }
            }
        }
        Command::Proximity { input, graph, out } => {
            let tag = LabelSet::from(graph.labelset);
            let m = netpbm::read_pgm(input, tag)?;
            m.validate(&o)?;
            let labels: Vec<u16> = (1..o.label_set_size(tag) as u16).collect();
            let p = proximity_matrix(&m, &labels, graph.t, graph.shape.into())?;
            let json = serde_json::to_string_pretty(&p).expect("serializable matrix") + "\n";
            match out {
                Some(path) => write_file(path, json),
                None => {
                    print!("{json}");
                    Ok(())
                }
            }
        }
        Command::Gmscore { gt, pred, graph, combined } => {
            let tag = LabelSet::from(graph.labelset);
            let gt = netpbm::read_pgm(gt, tag)?;
            let pred = netpbm::read_pgm(pred, tag)?;
            gt.validate(&o)?;
            pred.validate(&o)?;
            let labels: Vec<u16> = (1..o.label_set_size(tag) as u16).collect();
            let score = if *combined {
                combined_score(&gt, &pred, &labels, graph.t, graph.shape.into())?
            } else {
                gm_score(&gt, &pred, &labels, graph.t, graph.shape.into())?
            };
            println!("{score:.6}");
            Ok(())
        }
        Command::Render { input, out, labelset } => {
            let m = netpbm::read_pgm(input, (*labelset).into())?;
            render_to_file(&m, &o, out)
        }
        Command::Synth { width, height, objects, out } => {
            netpbm::write_pgm(out, &gen_synthetic(cli.seed, &o, *width, *height, *objects)?)
        }
        Command::ValidateOntology { .. } => unreachable!("handled above"),
    }
}

/// Factored maps of one crop, with side confidences when both score files
/// are present.
fn read_crop(dir: &Path) -> Result<FactoredMaps> {
    let mut f = FactoredMaps::read_dir(dir)?;
    let (lr, fb) = (dir.join(LR_SCORES_FILE), dir.join(FB_SCORES_FILE));
    if lr.is_file() && fb.is_file() {
        f.side_scores = Some(SideScores { lr: ScoreFile::read(&lr)?, fb: ScoreFile::read(&fb)? });
    }
    Ok(f)
}
