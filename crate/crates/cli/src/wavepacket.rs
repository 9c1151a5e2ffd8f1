use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Serialize;

use symkron_core::hagedorn::{
    global_sign, harmonic_flow, plan_realignment, transform_bundle, validate_params, wavepacket_eval, ParamPair,
    RealignMode, WavePacketBundle, DEFAULT_PARAM_TOL,
};
use symkron_core::io::{self, complex_to_json, JsonComplex, MatrixJson, ParamsJson, RealignmentPlanJson};
use symkron_core::{ComplexMatrix, MultiIndex};

use crate::exit::{CliError, CliResult};
use crate::{emit, read_file};

#[derive(Debug, Subcommand)]
pub enum WavepacketCommand {
    /// Packet values on a point set.
    Eval(EvalArgs),
    /// Transformation matrix to the parameters (AU, BU).
    Transform(TransformArgs),
    /// Unitary factor that makes A real.
    Realign(RealignArgs),
    /// Harmonic-oscillator flow of (A, B).
    Flow(FlowArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArg {
    /// {dim, hbar, A, B}.
    #[arg(long)]
    params: PathBuf,
    /// Tolerance on the compatibility residuals.
    #[arg(long, default_value_t = DEFAULT_PARAM_TOL)]
    param_tol: f64,
}

impl ParamsArg {
    fn load(&self) -> CliResult<ParamPair> {
        let (a, b, hbar) = io::read_params(&read_file(&self.params)?)?;
        Ok(validate_params(&a, &b, hbar, self.param_tol)?)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Polar,
    Svd,
}

impl From<ModeArg> for RealignMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Polar => RealignMode::Polar,
            ModeArg::Svd => RealignMode::Svd,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    params: ParamsArg,
    /// All packets of this order.
    #[arg(long)]
    order: usize,
    /// A single packet, comma-separated (e.g. 2,1); overrides --order.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
    /// CSV with one point of d coordinates per row.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    params: ParamsArg,
    #[arg(long)]
    order: usize,
    /// Unitary U as a JSON matrix.
    #[arg(long, conflicts_with = "realign", required_unless_present = "realign")]
    unitary: Option<PathBuf>,
    /// Use the realignment unitary instead of --unitary.
    #[arg(long, value_enum)]
    realign: Option<ModeArg>,
    /// Points at which to compare T·φ⃗[A,B] with φ⃗[AU,BU].
    #[arg(long)]
    points: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealignArgs {
    #[command(flatten)]
    params: ParamsArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Polar)]
    mode: ModeArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    params: ParamsArg,
    /// Times; repeat for several.
    #[arg(long, required = true, allow_hyphen_values = true)]
    t: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct EvalJson {
    labels: Vec<Vec<u32>>,
    points: Vec<Vec<f64>>,
    values: Vec<Vec<JsonComplex>>,
}

#[derive(Serialize)]
struct CrossCheck {
    points: usize,
    sign: f64,
    max_error: f64,
}

#[derive(Serialize)]
struct TransformJson {
    phase: JsonComplex,
    branch: &'static str,
    #[serde(rename = "U")]
    u: MatrixJson,
    #[serde(rename = "T")]
    t: MatrixJson,
    labels: Vec<Vec<u32>>,
    params: ParamsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    cross_check: Option<CrossCheck>,
}

#[derive(Serialize)]
struct FlowPoint {
    t: f64,
    #[serde(flatten)]
    params: ParamsJson,
}

pub fn run(cmd: WavepacketCommand) -> CliResult<()> {
    match cmd {
        WavepacketCommand::Eval(a) => eval(a),
        WavepacketCommand::Transform(a) => transform(a),
        WavepacketCommand::Realign(a) => realign(a),
        WavepacketCommand::Flow(a) => flow(a),
    }
}

fn eval(a: EvalArgs) -> CliResult<()> {
    let p = a.params.load()?;
    let points = io::read_points_csv(&read_file(&a.points)?, p.dim())?;
    let (labels, values) = match &a.k {
        Some(k) => {
            let k = MultiIndex::new(k.clone());
            let bundle = WavePacketBundle::new(p, k.modulus());
            let v = wavepacket_eval(&bundle, &k, &points)?;
            (vec![k], ComplexMatrix::new(1, v.len(), v)?)
        }
        None => {
            let bundle = WavePacketBundle::new(p, a.order);
            (bundle.labels()?.entries().to_vec(), bundle.eval_all(&points)?)
        }
    };
    let text = match a.format {
        Format::Csv => io::packets_to_csv(&labels, &points, &values)?,
        Format::Json => io::to_json_string(&EvalJson {
            labels: labels.iter().map(|k| k.entries().to_vec()).collect(),
            points: points.clone(),
            values: values
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(complex_to_json).collect())
                .collect(),
        }),
    };
    emit(a.out.as_ref(), &text)
}

fn transform(a: TransformArgs) -> CliResult<()> {
    let p = a.params.load()?;
    let u = match (&a.unitary, a.realign) {
        (Some(path), _) => io::read_matrix(&read_file(path)?)?,
        (None, Some(mode)) => plan_realignment(&p, mode.into())?.u,
        (None, None) => return Err(CliError::parse("one of --unitary or --realign is required")),
    };
    if u.rows() != p.dim() || !u.is_square() {
        return Err(symkron_core::Error::DimensionMismatch(format!(
            "U is {}x{}, parameters have dim {}",
            u.rows(),
            u.cols(),
            p.dim()
        ))
        .into());
    }
    let bundle = WavePacketBundle::new(p, a.order);
    let t = transform_bundle(&bundle, &u)?;
    let cross_check = match &a.points {
        Some(path) => {
            let points = io::read_points_csv(&read_file(path)?, bundle.params().dim())?;
            let mapped = &t.matrix * &bundle.eval_all(&points)?;
            let direct = t.bundle.eval_all(&points)?;
            let (sign, max_error) = global_sign(direct.data(), mapped.data());
            Some(CrossCheck {
                points: points.len(),
                sign,
                max_error,
            })
        }
        None => None,
    };
    let np = t.bundle.params();
    let out = TransformJson {
        phase: complex_to_json(t.phase),
        branch: "principal",
        u: MatrixJson::from(&u),
        t: MatrixJson::from(&t.matrix),
        labels: bundle.labels()?.iter().map(|k| k.entries().to_vec()).collect(),
        params: ParamsJson::new(np.a(), np.b(), np.hbar()),
        cross_check,
    };
    emit(a.out.as_ref(), &io::to_json_string(&out))
}

fn realign(a: RealignArgs) -> CliResult<()> {
    let p = a.params.load()?;
    let plan = plan_realignment(&p, a.mode.into())?;
    emit(a.out.as_ref(), &io::to_json_string(&RealignmentPlanJson::from(&plan)))
}

fn flow(a: FlowArgs) -> CliResult<()> {
    let p = a.params.load()?;
    let mut points = Vec::with_capacity(a.t.len());
    for &t in &a.t {
        let (at, bt) = harmonic_flow(p.a(), p.b(), t)?;
        points.push(FlowPoint {
            t,
            params: ParamsJson::new(&at, &bt, p.hbar()),
        });
    }
    let text = if points.len() == 1 {
        io::to_json_string(&points[0].params)
    } else {
        io::to_json_string(&points)
    };
    emit(a.out.as_ref(), &text)
}
