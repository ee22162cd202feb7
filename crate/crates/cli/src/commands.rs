use std::path::Path;

use serde_json::{json, Map, Value};
use toric_core::asymptotics::{asymptotic_rr_check, hhat, limit_probe};
use toric_core::cohomology::{cech_oracle, euler_char, h_all_with_cap};
use toric_core::divisor::is_ample;
use toric_core::gkz::{
    ample_report, enumerate_maximal_chambers, locate_chamber, xi_and_id, ChamberLocation, EnumerateOptions,
};
use toric_core::polyhedra::{ehrhart_probe, normalized_volume, region};
use toric_core::{fixtures, Error, Fan, RaySet, TWeilDivisor};

use crate::input::{load_divisor, load_fan, FanDocument};
use crate::report::{cones, counts, divisor, put_q, put_qs, q, rays};
use crate::{CliError, Context, Outcome};

fn fan_summary(fan: &Fan) -> Value {
    json!({
        "dim": fan.dim(),
        "num_rays": fan.num_rays(),
        "cone_counts": fan.cone_counts(),
        "complete": fan.is_complete(),
        "simplicial": fan.is_simplicial(),
    })
}

/// Loads and validates a fan, rescaling non-primitive rays with a warning.
fn fan(ctx: &mut Context, path: &Path) -> Result<Fan, CliError> {
    let doc = load_fan(path)?;
    ctx.inputs.insert("fan_sha256".into(), json!(doc.sha256));
    let mut raw = doc.value.raw();
    for i in raw.primitivize() {
        ctx.warnings.push(format!("ray {i} was not primitive and has been rescaled"));
    }
    Ok(raw.validate()?)
}

fn job(ctx: &mut Context, fan_path: &Path, divisor_path: &Path) -> Result<(Fan, TWeilDivisor), CliError> {
    let f = fan(ctx, fan_path)?;
    let d = load_divisor(divisor_path)?;
    ctx.inputs.insert("divisor_sha256".into(), json!(d.sha256));
    d.value.check(&f)?;
    Ok((f, d.value))
}

pub fn validate(ctx: &mut Context, path: &Path) -> Result<Outcome, CliError> {
    let doc = load_fan(path)?;
    ctx.inputs.insert("fan_sha256".into(), json!(doc.sha256));
    let f = doc.value.raw().validate()?;
    let mut result = fan_summary(&f);
    result["valid"] = json!(true);
    result["diagnostics"] = json!([]);
    Ok(Outcome::ok(result))
}

pub fn cohom(ctx: &mut Context, f: &Path, d: &Path, check_oracle: bool, cap: usize) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    let h = h_all_with_cap(&fan, &d, cap)?;
    let mut result = json!({
        "h": counts(&h.0),
        "euler": h.alternating_sum().to_string(),
    });
    let mut check_failed = None;
    if check_oracle {
        let oracle = cech_oracle(&fan, &d)?;
        let agrees = oracle == h;
        result["oracle"] = counts(&oracle.0);
        result["oracle_agrees"] = json!(agrees);
        if !agrees {
            check_failed = Some(format!("Čech oracle gives {:?}, region sum gives {:?}", oracle.0, h.0));
        }
    }
    Ok(Outcome { result, check_failed })
}

pub fn euler(ctx: &mut Context, f: &Path, d: &Path) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    Ok(Outcome::ok(json!({ "euler": euler_char(&fan, &d)?.to_string() })))
}

pub fn asym(ctx: &mut Context, f: &Path, d: &Path) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    let h = hhat(&fan, &d)?;
    let mut m = Map::new();
    put_qs(&mut m, "hhat", &h.0);
    put_q(&mut m, "alternating_sum", &h.alternating_sum());
    Ok(Outcome::ok(Value::Object(m)))
}

pub fn selfint(ctx: &mut Context, f: &Path, d: &Path) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    let (lhs, rhs) = asymptotic_rr_check(&fan, &d)?;
    let mut m = Map::new();
    put_q(&mut m, "self_intersection", &lhs);
    put_q(&mut m, "hhat_alternating_sum", &rhs);
    m.insert("agrees".into(), json!(lhs == rhs));
    let check_failed = (lhs != rhs).then(|| "self-intersection differs from the alternating sum of ĥ".to_string());
    Ok(Outcome { result: Value::Object(m), check_failed })
}

pub fn probe(ctx: &mut Context, f: &Path, d: &Path, m_max: usize, subset: Option<&[usize]>) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    let mut m = Map::new();
    match subset {
        None => {
            let table = limit_probe(&fan, &d, m_max)?;
            put_qs(&mut m, "hhat", &hhat(&fan, &d)?.0);
            let rows: Vec<Value> = table
                .iter()
                .map(|row| {
                    let mut r = Map::new();
                    r.insert("m".into(), json!(row.m));
                    put_qs(&mut r, "scaled", &row.scaled);
                    Value::Object(r)
                })
                .collect();
            m.insert("rows".into(), Value::Array(rows));
        }
        Some(idx) => {
            if let Some(&bad) = idx.iter().find(|&&i| i >= fan.num_rays()) {
                return Err(Error::InvalidArgument(format!("subset index {bad} is not a ray")).into());
            }
            let set: RaySet = idx.iter().copied().collect();
            let table = ehrhart_probe(&fan, &d, set, m_max)?;
            m.insert("subset".into(), rays(set));
            put_q(&mut m, "volume", &normalized_volume(&region(&fan, &d, set)?)?);
            let rows: Vec<Value> = table
                .iter()
                .map(|row| {
                    let mut r = Map::new();
                    r.insert("m".into(), json!(row.m));
                    r.insert("count".into(), json!(row.count.to_string()));
                    put_q(&mut r, "scaled", &row.scaled);
                    Value::Object(r)
                })
                .collect();
            m.insert("rows".into(), Value::Array(rows));
        }
    }
    Ok(Outcome::ok(Value::Object(m)))
}

fn chamber(fan: &Fan, loc: &ChamberLocation) -> Value {
    json!({
        "sigma_rays": rays(loc.sigma.rays()),
        "sigma_cones": cones(loc.sigma.extremal_cones()),
        "degenerate": loc.sigma.is_degenerate(),
        "I": rays(loc.i_d),
        "interior": loc.interior,
        "ample_chamber": loc.is_ample_chamber(fan),
    })
}

pub fn gkz_locate(ctx: &mut Context, f: &Path, d: &Path) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    let loc = locate_chamber(&fan, &d)?;
    let (xi, _) = xi_and_id(&fan, &d)?;
    let mut result = chamber(&fan, &loc);
    result["xi_at_rays"] = xi.ray_values().iter().map(q).collect();
    Ok(Outcome::ok(result))
}

pub fn gkz_enumerate(ctx: &mut Context, f: &Path, dim3: bool) -> Result<Outcome, CliError> {
    let fan = fan(ctx, f)?;
    let found = enumerate_maximal_chambers(&fan, EnumerateOptions { allow_dim3: dim3 })?;
    let chambers: Vec<Value> = found
        .iter()
        .map(|c| {
            json!({
                "sigma_rays": rays(c.sigma_rays()),
                "sigma_cones": cones(c.cone.sigma().extremal_cones()),
                "I": rays(c.subset()),
                "sample_divisor": divisor(&c.sample),
                "ample_chamber": c.cone.sigma().equals_fan(&fan) && c.subset().is_empty(),
            })
        })
        .collect();
    Ok(Outcome::ok(json!({ "count": chambers.len(), "chambers": chambers })))
}

pub fn ample(ctx: &mut Context, f: &Path, d: &Path) -> Result<Outcome, CliError> {
    let (fan, d) = job(ctx, f, d)?;
    let direct = is_ample(&fan, &d)?;
    let report = ample_report(&fan, &d)?;
    let by_chamber = report
        .chamber
        .as_ref()
        .is_some_and(|c| c.interior && c.is_ample_chamber(&fan));
    let agree = direct == report.ample && direct == by_chamber;
    let mut vanishing = Map::new();
    vanishing.insert("at_divisor".into(), json!(report.higher_vanish_at_d));
    vanishing.insert("neighborhood".into(), json!(report.neighborhood_higher_vanish));
    put_q(&mut vanishing, "step", &report.step);
    let result = json!({
        "is_ample": direct,
        "via_asymptotics": report.ample,
        "via_chamber": by_chamber,
        "agree": agree,
        "higher_vanishing": Value::Object(vanishing),
        "chamber": report.chamber.as_ref().map(|c| chamber(&fan, c)),
    });
    let check_failed = (!agree).then(|| "ampleness routes disagree".to_string());
    Ok(Outcome { result, check_failed })
}

pub fn fixture(name: &str) -> Option<Value> {
    fixtures::all()
        .into_iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, f)| serde_json::to_value(FanDocument::from_fan(&f)).expect("fan document serializes"))
}
