use std::io::Write as _;
use std::path::{Path, PathBuf};

use odhd_cim::{odds_shapes, simulate_testing, simulate_training, sweep, CostTable, DatasetShape, Design, SimConfig};
use odhd_core::data::{load_dataset, Dataset};
use odhd_core::experiment::{run_experiment, ExperimentConfig};
use odhd_core::odhd::fit;
use odhd_core::synthetic::{gaussian_benchmark, GaussianSpec};
use odhd_core::{rng, Label, OdhdConfig, OneClassModel, Variant};

use crate::args::{DetectArgs, EvalArgs, ModelArgs, SimulateArgs, SweepArgs, TrainArgs, VariantArg};
use crate::config::{self, FileConfig};
use crate::error::{CliError, Result};

const SYNTHETIC: &str = "synthetic";

fn variant(v: VariantArg) -> Variant {
    match v {
        VariantArg::Software => Variant::Software,
        VariantArg::Cim => Variant::CimFriendly,
    }
}

fn odhd_config(flags: &ModelArgs, file: &FileConfig) -> OdhdConfig {
    let d = OdhdConfig::default();
    OdhdConfig {
        dims: flags.dims.or(file.dims).unwrap_or(d.dims),
        levels: flags.levels.or(file.levels).unwrap_or(d.levels),
        epochs: flags.epochs.or(file.epochs).unwrap_or(d.epochs),
        variant: flags.variant.or(file.variant).map(variant).unwrap_or(d.variant),
    }
}

fn require_file(p: &Path, what: &str) -> Result<()> {
    if !p.is_file() {
        return Err(CliError::Config(format!("{what} `{}` does not exist", p.display())));
    }
    Ok(())
}

/// `synthetic` draws the Gaussian benchmark from the master stream.
fn dataset(spec: Option<String>, seed: u64) -> Result<Dataset> {
    let spec = spec.ok_or_else(|| CliError::Config("no dataset given (--dataset)".into()))?;
    if spec == SYNTHETIC {
        return Ok(gaussian_benchmark(&GaussianSpec::default(), &mut rng::master(seed))?);
    }
    let path = PathBuf::from(&spec);
    require_file(&path, "dataset")?;
    Ok(load_dataset(&path)?)
}

/// Writes through a temporary file in the target directory, then renames.
fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let Some(path) = out else {
        std::io::stdout().write_all(bytes).map_err(|e| CliError::Other(e.to_string()))?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Other(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

pub fn train(a: TrainArgs) -> Result<()> {
    let file = config::load(a.common.config.as_deref())?;
    let seed = a.common.seed.or(file.seed).unwrap_or(0);
    let cfg = odhd_config(&a.model, &file);
    let ds = dataset(a.dataset.or(file.dataset), seed)?;
    let rows: Vec<Vec<f64>> = ds
        .features
        .iter()
        .zip(&ds.labels)
        .filter(|(_, l)| **l == Label::Inlier)
        .map(|(r, _)| r.clone())
        .collect();
    let (model, _) = fit(&rows, &cfg, &mut rng::master(seed))?;
    let mut text = model.to_json()?;
    text.push('\n');
    write_output(a.common.out.or(file.out).as_deref(), text.as_bytes())
}

pub fn detect(a: DetectArgs) -> Result<()> {
    let file = config::load(a.common.config.as_deref())?;
    let seed = a.common.seed.or(file.seed).unwrap_or(0);
    let model_path = a
        .model
        .or(file.model)
        .ok_or_else(|| CliError::Config("no model given (--model)".into()))?;
    require_file(&model_path, "model")?;
    let text = std::fs::read_to_string(&model_path).map_err(|e| CliError::Other(e.to_string()))?;
    let model = OneClassModel::from_json(&text)?;
    let ds = dataset(a.dataset.or(file.dataset), seed)?;
    let mut out = String::from("index,score,prediction,label\n");
    for (i, (x, truth)) in ds.features.iter().zip(&ds.labels).enumerate() {
        let (pred, score) = model.detect(x)?;
        out.push_str(&format!("{i},{score},{},{}\n", label_digit(pred), label_digit(*truth)));
    }
    write_output(a.common.out.or(file.out).as_deref(), out.as_bytes())
}

fn label_digit(l: Label) -> u8 {
    u8::from(l.is_outlier())
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let file = config::load(a.common.config.as_deref())?;
    let seed = a.common.seed.or(file.seed).unwrap_or(0);
    let model = odhd_config(&a.model, &file);
    let name = a.dataset.or(file.dataset);
    let ds = dataset(name.clone(), seed)?;
    let d = ExperimentConfig::default();
    let cfg = ExperimentConfig {
        dataset: name.unwrap_or_default(),
        variant: model.variant,
        dims: model.dims,
        levels: model.levels,
        epochs: model.epochs,
        repeats: a.repeats.or(file.repeats).unwrap_or(d.repeats),
        seed,
        train_fraction: a.train_fraction.or(file.train_fraction).unwrap_or(d.train_fraction),
        record_timings: a.timings || file.timings.unwrap_or(false),
    };
    let summary = run_experiment(&ds, &cfg)?;
    write_output(a.common.out.or(file.out).as_deref(), &json(&summary)?)
}

fn resolve_design(spec: &str, table: Option<&CostTable>) -> Result<Design> {
    let mut d = match Design::preset(spec) {
        Ok(d) => d,
        Err(_) => {
            let p = Path::new(spec);
            if !p.is_file() {
                return Err(CliError::Config(format!(
                    "design `{spec}` is neither design1/design2/design3 nor an existing file"
                )));
            }
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Other(e.to_string()))?;
            Design::from_json(&text)?
        }
    };
    if let Some(t) = table {
        d.costs = t.clone();
        d.validate()?;
    }
    Ok(d)
}

fn load_cost_table(p: Option<&Path>) -> Result<Option<CostTable>> {
    let Some(p) = p else { return Ok(None) };
    require_file(p, "cost table")?;
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Other(e.to_string()))?;
    let t: CostTable = serde_json::from_str(&text)?;
    t.validate()?;
    Ok(Some(t))
}

fn resolve_shape(spec: &str) -> Result<DatasetShape> {
    if let Some(s) = odds_shapes().into_iter().find(|s| s.name.eq_ignore_ascii_case(spec)) {
        return Ok(s);
    }
    let p = Path::new(spec);
    if !p.is_file() {
        let names: Vec<String> = odds_shapes().into_iter().map(|s| s.name).collect();
        return Err(CliError::Config(format!(
            "shape `{spec}` is not a file or one of {}",
            names.join(", ")
        )));
    }
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Other(e.to_string()))?;
    Ok(serde_json::from_str(&text)?)
}

fn shape_of(ds: &Dataset) -> DatasetShape {
    DatasetShape::new(ds.name.clone(), ds.len(), ds.n_features(), ds.n_outliers())
}

fn sim_config(dims: Option<usize>, levels: Option<usize>, epochs: Option<usize>, file: &FileConfig) -> SimConfig {
    let d = SimConfig::default();
    SimConfig {
        dims: dims.or(file.dims).unwrap_or(d.dims),
        levels: levels.or(file.levels).unwrap_or(d.levels),
        epochs: epochs.or(file.epochs).unwrap_or(d.epochs),
    }
}

/// JSON to `out`, text rendering next to it with a `.txt` extension; text
/// only on stdout.
fn write_report(out: Option<&Path>, json_bytes: &[u8], text: &str) -> Result<()> {
    match out {
        Some(p) => {
            write_output(Some(p), json_bytes)?;
            write_output(Some(&p.with_extension("txt")), text.as_bytes())
        }
        None => write_output(None, text.as_bytes()),
    }
}

#[derive(serde::Serialize)]
struct SimulationOutput {
    training: odhd_cim::BreakdownReport,
    testing: odhd_cim::BreakdownReport,
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    let file = config::load(a.common.config.as_deref())?;
    let seed = a.common.seed.or(file.seed).unwrap_or(0);
    let table = load_cost_table(a.cost_table.or(file.cost_table.clone()).as_deref())?;
    let design_spec = a
        .design
        .or_else(|| file.design.clone().and_then(|d| d.into_vec().into_iter().next()))
        .unwrap_or_else(|| "design1".into());
    let design = resolve_design(&design_spec, table.as_ref())?;
    let shape_spec = a.shape.or_else(|| file.shape.clone().and_then(|s| s.into_vec().into_iter().next()));
    let shape = match (shape_spec, a.dataset.or(file.dataset.clone())) {
        (Some(s), _) => resolve_shape(&s)?,
        (None, Some(ds)) => shape_of(&dataset(Some(ds), seed)?),
        (None, None) => resolve_shape("WBC")?,
    };
    let cfg = sim_config(a.dims, a.levels, a.epochs, &file);
    let out = SimulationOutput {
        training: simulate_training(&shape, &cfg, &design)?,
        testing: simulate_testing(&shape, &cfg, &design)?,
    };
    let text = format!("{}\n{}", out.training.to_text(), out.testing.to_text());
    write_report(a.common.out.or(file.out).as_deref(), &json(&out)?, &text)
}

pub fn sweep_cmd(a: SweepArgs) -> Result<()> {
    let file = config::load(a.common.config.as_deref())?;
    let table = load_cost_table(a.cost_table.or(file.cost_table.clone()).as_deref())?;
    let mut specs = a.design;
    if specs.is_empty() {
        specs = file.design.clone().map(|d| d.into_vec()).unwrap_or_default();
    }
    if specs.is_empty() {
        specs = vec!["design1".into(), "design2".into(), "design3".into()];
    }
    let designs = specs.iter().map(|s| resolve_design(s, table.as_ref())).collect::<Result<Vec<_>>>()?;
    let mut shape_specs = a.shape;
    if shape_specs.is_empty() {
        shape_specs = file.shape.clone().map(|s| s.into_vec()).unwrap_or_default();
    }
    let shapes = if shape_specs.is_empty() {
        odds_shapes()
    } else {
        shape_specs.iter().map(|s| resolve_shape(s)).collect::<Result<Vec<_>>>()?
    };
    let cfg = sim_config(a.dims, a.levels, a.epochs, &file);
    let report = sweep(&designs, &shapes, &cfg)?;
    write_report(a.common.out.or(file.out).as_deref(), &json(&report)?, &report.to_text())
}
