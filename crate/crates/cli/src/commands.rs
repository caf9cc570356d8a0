//! Subcommand bodies. Each returns either a JSON result, wrapped into the
//! envelope by the caller, or raw bytes (CSV, SVG) written as is.

use freecomp_core::convolve::compress_law;
use freecomp_core::geometry::{
    boundary_cloud, in_l, membership, to_chamber, BoundaryPoint, DEFAULT_MEMBERSHIP_TOL,
};
use freecomp_core::measure::{AtomicMeasure, DEFAULT_MERGE_TOL};
use freecomp_core::rmt::{eigenvector_statistics, haar_isometry, product_norm_sim, sample_kcloud, subspace_dim};
use freecomp_core::tnorm::{beta_vector, grad_tnorm, in_sup_regime, tnorm, tnorm_flat};
use freecomp_core::{Error, RngStream, SimplexPoint};
use serde_json::{json, Value};

use crate::csv_out::{emit_csv, Cell};
use crate::svg::{emit_svg, SvgStyle};
use crate::{
    BetaArgs, BoundaryArgs, CliError, Command, DensityArgs, FlatArgs, KcheckArgs, PlotArgs, ProductSimArgs,
    SimulateArgs, TnormArgs,
};

pub enum Payload {
    Json(Value),
    Raw(Vec<u8>),
}

type Outcome = Result<Payload, CliError>;

pub fn execute(command: &Command) -> Outcome {
    match command {
        Command::Tnorm(a) => run_tnorm(a),
        Command::Flat(a) => run_flat(a),
        Command::Boundary(a) => run_boundary(a),
        Command::Density(a) => run_density(a),
        Command::Kcheck(a) => run_kcheck(a),
        Command::Beta(a) => run_beta(a),
        Command::Simulate(a) => run_simulate(a),
        Command::ProductSim(a) => run_product_sim(a),
        Command::Plot(a) => run_plot(a),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("result types serialize")
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn indexed(prefix: &str, k: usize) -> impl Iterator<Item = String> + '_ {
    (1..=k).map(move |i| format!("{prefix}{i}"))
}

fn run_tnorm(args: &TnormArgs) -> Outcome {
    let result = tnorm(&args.vector.0, args.t)?;
    let gradient = match grad_tnorm(&args.vector.0, args.t) {
        Ok(g) => Some(g),
        Err(Error::NonSmooth { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut value = to_json(&result);
    value["gradient"] = to_json(&gradient);
    Ok(Payload::Json(value))
}

fn run_flat(args: &FlatArgs) -> Outcome {
    let values = (1..=args.k)
        .map(|j| tnorm_flat(j, args.k, args.t))
        .collect::<Result<Vec<f64>, Error>>()?;
    if args.csv {
        let rows: Vec<Vec<Cell>> = values.iter().enumerate().map(|(i, &v)| vec![(i + 1).into(), v.into()]).collect();
        return Ok(Payload::Raw(emit_csv(&header(&["j", "value"]), &rows)?));
    }
    let rows: Vec<Value> = values.iter().enumerate().map(|(i, v)| json!({ "j": i + 1, "value": v })).collect();
    Ok(Payload::Json(json!({ "values": rows })))
}

fn run_beta(args: &BetaArgs) -> Outcome {
    let beta = beta_vector(args.k, args.t)?;
    if args.csv {
        let rows: Vec<Vec<Cell>> = beta.iter().enumerate().map(|(i, &v)| vec![(i + 1).into(), v.into()]).collect();
        return Ok(Payload::Raw(emit_csv(&header(&["j", "beta"]), &rows)?));
    }
    Ok(Payload::Json(json!({ "beta": beta })))
}

fn run_boundary(args: &BoundaryArgs) -> Outcome {
    let cloud = boundary_cloud(args.k, args.t, args.samples, &RngStream::new(args.seed))?;
    if args.csv {
        let names: Vec<String> = indexed("lambda", args.k).chain(indexed("dir", args.k)).collect();
        let rows: Vec<Vec<Cell>> = cloud
            .iter()
            .map(|p| p.lambda.coords().iter().chain(p.direction.coords()).map(|&v| v.into()).collect())
            .collect();
        return Ok(Payload::Raw(emit_csv(&names, &rows)?));
    }
    Ok(Payload::Json(json!({ "points": cloud })))
}

fn run_density(args: &DensityArgs) -> Outcome {
    let mu = AtomicMeasure::from_vector(&args.vector.0, DEFAULT_MERGE_TOL)?;
    if args.grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points".into()).into());
    }
    let (atoms, support, points) = if args.t == 1.0 {
        // no compression: the law of diag(vector) itself
        let atoms: Vec<(f64, f64)> = mu.atoms().iter().map(|a| (a.location, a.weight)).collect();
        (atoms, (mu.x_min(), mu.x_max()), Vec::new())
    } else {
        let mut law = compress_law(&mu, args.t)?;
        law.epsilon = args.epsilon;
        let (lo, hi) = law.support;
        let points = (0..args.grid)
            .map(|i| {
                let y = lo + (hi - lo) * i as f64 / (args.grid - 1) as f64;
                Ok((y, law.density(y)?))
            })
            .collect::<Result<Vec<(f64, f64)>, Error>>()?;
        (law.atoms, law.support, points)
    };
    if args.csv {
        let rows: Vec<Vec<Cell>> = points.iter().map(|&(y, f)| vec![y.into(), f.into()]).collect();
        return Ok(Payload::Raw(emit_csv(&header(&["y", "density"]), &rows)?));
    }
    let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();
    Ok(Payload::Json(json!({
        "atoms": atoms.iter().map(|&(location, mass)| json!({ "location": location, "mass": mass })).collect::<Vec<_>>(),
        "atom_mass": atom_mass,
        "support": [support.0, support.1],
        "points": points.iter().map(|&(y, density)| json!({ "y": y, "density": density })).collect::<Vec<_>>(),
    })))
}

fn run_kcheck(args: &KcheckArgs) -> Outcome {
    let k = args.k.unwrap_or(args.lambda.0.len());
    if k != args.lambda.0.len() {
        return Err(Error::InvalidArgument(format!("--lambda has {} entries, expected k = {k}", args.lambda.0.len())).into());
    }
    let lambda = SimplexPoint::new(args.lambda.0.clone())?;
    let report = membership(&lambda, k, args.t, args.grid, DEFAULT_MEMBERSHIP_TOL)?;
    let in_l = in_l(&lambda, k, args.t)?;
    let mut value = to_json(&report);
    value["in_l"] = json!(in_l);
    Ok(Payload::Json(value))
}

fn run_simulate(args: &SimulateArgs) -> Outcome {
    let rank = args.rank.unwrap_or_else(|| freecomp_core::rmt::default_rank(args.n));
    let report = eigenvector_statistics(&args.vector.0, args.n, args.t, rank, args.trials, &RngStream::new(args.seed))?;
    if args.csv {
        let k = args.vector.0.len();
        let names: Vec<String> = ["trial", "top_eigenvalue", "rank_eigenvalue"]
            .iter()
            .map(|s| s.to_string())
            .chain(indexed("lambda", k))
            .collect();
        let rows: Vec<Vec<Cell>> = report
            .trials
            .iter()
            .map(|r| {
                let mut row = vec![r.trial.into(), r.top_eigenvalue.into(), r.rank_eigenvalue.into()];
                row.extend(r.schmidt_lambda.iter().map(|&v| Cell::from(v)));
                row
            })
            .collect();
        return Ok(Payload::Raw(emit_csv(&names, &rows)?));
    }
    Ok(Payload::Json(to_json(&report)))
}

fn run_product_sim(args: &ProductSimArgs) -> Outcome {
    let mu_a = AtomicMeasure::from_vector(&args.vector.0, DEFAULT_MERGE_TOL)?;
    let mu_b = match (&args.lambda, args.t) {
        (Some(lambda), _) => AtomicMeasure::from_vector(&lambda.0, DEFAULT_MERGE_TOL)?,
        (None, Some(t)) => AtomicMeasure::bernoulli(t)?,
        (None, None) => unreachable!("clap requires --lambda or --t"),
    };
    let report = product_norm_sim(&mu_a, &mu_b, args.n, args.trials, &RngStream::new(args.seed))?;
    if args.csv {
        let rows: Vec<Vec<Cell>> = report.samples.iter().enumerate().map(|(i, &v)| vec![i.into(), v.into()]).collect();
        return Ok(Payload::Raw(emit_csv(&header(&["trial", "top_eigenvalue"]), &rows)?));
    }
    Ok(Payload::Json(to_json(&report)))
}

/// Chamber points on the boundary of `K_{k,t}`. Once `K_{k,t}` is the whole
/// simplex the exposed points degenerate to vertices, so the simplex edges
/// are traced instead.
fn plot_boundary(k: usize, t: f64, samples: usize, stream: &RngStream) -> Result<Vec<SimplexPoint>, CliError> {
    if !in_sup_regime(k, t) {
        let cloud = boundary_cloud(k, t, samples, stream)?;
        return Ok(cloud.into_iter().map(|BoundaryPoint { lambda, .. }| lambda).collect());
    }
    let steps = samples.max(2);
    (0..steps)
        .map(|i| {
            let u = 0.5 * i as f64 / (steps - 1) as f64;
            let mut coords = vec![0.0; k];
            coords[0] = 1.0 - u;
            coords[1] = u;
            Ok(SimplexPoint::new(coords)?)
        })
        .collect()
}

fn run_plot(args: &PlotArgs) -> Outcome {
    if args.k != 2 && args.k != 3 {
        return Err(CliError::UnsupportedK(args.k));
    }
    let stream = RngStream::new(args.seed);
    let boundary = plot_boundary(args.k, args.t, args.samples, &stream.child(0))?;
    let cloud = match args.n {
        Some(n) => {
            let dim = subspace_dim(args.k, n, args.t)?;
            let v = haar_isometry(args.k * n, dim, &stream.child(1))?;
            let points = sample_kcloud(&v, args.k, n, args.samples, &stream.child(2))?;
            Some(points.iter().map(to_chamber).collect::<Vec<_>>())
        }
        None => None,
    };
    let svg = emit_svg(args.k, args.t, &boundary, cloud.as_deref(), &SvgStyle::default())?;
    Ok(Payload::Raw(svg))
}
