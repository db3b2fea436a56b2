//! Command implementations over a parsed input document. All output is
//! byte-deterministic for fixed inputs.

use toric::exactlin::{render_rat, render_rat_vec, FgAbelianGroup, Rat};
use toric::extension::SExtension;
use toric::fan::{validate_stacky_data, FanError, StackyFan};
use toric::ifun::iseries;
use toric::verify::{verify_all, CheckSelection};

use crate::input::InputDoc;

/// Exit status contract: 0 success / all checks pass, 1 verification
/// failure, 2 input error.
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

fn ok(stdout: String) -> Outcome {
    Outcome { stdout, exit: 0 }
}

fn input_error(msg: String) -> Outcome {
    Outcome {
        stdout: msg,
        exit: 2,
    }
}

pub fn fan_from_doc(doc: &InputDoc) -> Result<StackyFan, FanError> {
    let group = FgAbelianGroup::new(doc.rank, doc.torsion.clone()).map_err(|e| {
        FanError::InvalidWeights(format!("invalid torsion coefficients: {e}"))
    })?;
    StackyFan::new(group, doc.rays.clone(), doc.max_cones.clone())
}

fn build(doc: &InputDoc) -> Result<(StackyFan, SExtension), Outcome> {
    let fan = fan_from_doc(doc).map_err(|e| input_error(format!("{e}")))?;
    let ext = SExtension::new(&fan, doc.extension.clone())
        .map_err(|e| input_error(format!("invalid extension: {e}")))?;
    Ok((fan, ext))
}

pub fn cmd_validate(doc: &InputDoc) -> Outcome {
    let group = match FgAbelianGroup::new(doc.rank, doc.torsion.clone()) {
        Ok(g) => g,
        Err(e) => return input_error(format!("invalid torsion coefficients: {e}\nFAN INVALID\n")),
    };
    let report = validate_stacky_data(&group, &doc.rays, &doc.max_cones);
    let mut out = format!("{report}");
    if report.is_valid() {
        out.push_str("FAN VALID\n");
        ok(out)
    } else {
        out.push_str("FAN INVALID\n");
        Outcome {
            stdout: out,
            exit: 2,
        }
    }
}

pub fn cmd_box(doc: &InputDoc) -> Outcome {
    let (fan, _) = match build(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let mut out = String::new();
    for b in fan.box_all() {
        let cone: Vec<String> = b.cone.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "BOX b={} cone={{{}}} fracs={} age={}\n",
            b.label(),
            cone.join(","),
            render_rat_vec(&b.fracs),
            render_rat(&b.age)
        ));
    }
    out.push_str(&format!("TOTAL {} box elements\n", fan.box_all().len()));
    ok(out)
}

pub fn cmd_weights(doc: &InputDoc) -> Outcome {
    let (fan, _) = match build(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let mut out = String::new();
    for sigma in 0..fan.max_cones().len() {
        let ws = fan.fixed_point_weights(sigma);
        for &i in fan.max_cone(sigma) {
            out.push_str(&format!(
                "WEIGHT sigma={} i={} u={}\n",
                sigma,
                i,
                render_rat_vec(ws.weight(i))
            ));
        }
    }
    ok(out)
}

pub fn cmd_mori(doc: &InputDoc) -> Outcome {
    let (fan, _) = match build(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let gens = match fan.mori_generators() {
        Ok(g) => g,
        Err(e) => return input_error(format!("{e}")),
    };
    let mut out = String::new();
    for g in &gens {
        let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("MORI ray=({})\n", parts.join(",")));
    }
    out.push_str(&format!("TOTAL {} rays\n", gens.len()));
    ok(out)
}

pub struct SeriesOptions {
    pub sigma: Option<usize>,
    pub cutoff: Option<Rat>,
    pub jobs: usize,
}

pub fn cmd_ifunction(doc: &InputDoc, opts: &SeriesOptions) -> Outcome {
    let (fan, ext) = match build(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if !fan.check_kahler(&doc.kahler) {
        return input_error("kahler class is not positive on the Mori cone".to_string());
    }
    let cutoff = opts.cutoff.clone().unwrap_or_else(|| doc.cutoff.clone());
    let sigmas: Vec<usize> = match opts.sigma {
        Some(s) if s < fan.max_cones().len() => vec![s],
        Some(s) => {
            return input_error(format!(
                "cone index {s} out of range ({} top cones)",
                fan.max_cones().len()
            ))
        }
        None => (0..fan.max_cones().len()).collect(),
    };
    let mut out = String::new();
    for sigma in sigmas {
        let series = match iseries(&fan, &ext, sigma, &doc.kahler, &cutoff, opts.jobs) {
            Ok(s) => s,
            Err(e) => return input_error(format!("{e}")),
        };
        for line in series.render_lines() {
            out.push_str(&line);
            out.push('\n');
        }
    }
    ok(out)
}

pub struct VerifyOptions {
    pub cutoff: Option<Rat>,
    pub checks: Option<String>,
    pub jobs: usize,
}

pub fn cmd_verify(doc: &InputDoc, opts: &VerifyOptions) -> Outcome {
    let (fan, ext) = match build(doc) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let selection = match &opts.checks {
        None => CheckSelection::default(),
        Some(list) => {
            let mut sel = CheckSelection {
                c1: false,
                c2: false,
                restriction: false,
            };
            for item in list.split(',') {
                match item.trim() {
                    "c1" => sel.c1 = true,
                    "c2" => sel.c2 = true,
                    "restriction" => sel.restriction = true,
                    other => {
                        return input_error(format!(
                            "unknown check \"{other}\" (known: c1, c2, restriction)"
                        ))
                    }
                }
            }
            sel
        }
    };
    let cutoff = opts.cutoff.clone().unwrap_or_else(|| doc.cutoff.clone());
    let report = match verify_all(&fan, &ext, &doc.kahler, &cutoff, opts.jobs, &selection) {
        Ok(r) => r,
        Err(e) => return input_error(format!("{e}")),
    };
    let mut out = String::new();
    for line in report.render_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&report.summary());
    out.push('\n');
    Outcome {
        stdout: out,
        exit: if report.all_passed() { 0 } else { 1 },
    }
}

/// Dispatches a subcommand name plus raw flags, as used by `example ... --`.
pub fn dispatch(doc: &InputDoc, sub: &str, flags: &[String]) -> Result<Outcome, String> {
    let mut sigma = None;
    let mut cutoff = None;
    let mut checks = None;
    let mut jobs = 1usize;
    let mut it = flags.iter();
    while let Some(flag) = it.next() {
        let mut grab = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or(format!("{name} expects a value"))
        };
        match flag.as_str() {
            "--sigma" => {
                sigma = Some(
                    grab("--sigma")?
                        .parse::<usize>()
                        .map_err(|_| "--sigma expects an index".to_string())?,
                )
            }
            "--cutoff" => {
                let v = grab("--cutoff")?;
                cutoff = Some(
                    toric::exactlin::parse_rat(&v)
                        .ok_or(format!("--cutoff: invalid rational \"{v}\""))?,
                )
            }
            "--checks" => checks = Some(grab("--checks")?),
            "--jobs" => {
                jobs = grab("--jobs")?
                    .parse::<usize>()
                    .map_err(|_| "--jobs expects a count".to_string())?
            }
            other => return Err(format!("unknown flag \"{other}\" for {sub}")),
        }
    }
    Ok(match sub {
        "validate" => cmd_validate(doc),
        "box" => cmd_box(doc),
        "weights" => cmd_weights(doc),
        "mori" => cmd_mori(doc),
        "ifunction" => cmd_ifunction(
            doc,
            &SeriesOptions {
                sigma,
                cutoff,
                jobs,
            },
        ),
        "verify" => cmd_verify(
            doc,
            &VerifyOptions {
                cutoff,
                checks,
                jobs,
            },
        ),
        other => return Err(format!("unknown subcommand \"{other}\"")),
    })
}
