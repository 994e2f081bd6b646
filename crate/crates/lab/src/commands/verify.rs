use std::fs;
use std::io::Write;

use ghostlab_core::constraints::{transcribed_constraints, verify_nonexistence, NonexistenceReport, NonexistenceVerdict};

use super::{say, Context};
use crate::config::output_name;
use crate::error::{LabError, Result};
use crate::export::Table;
use crate::fixture::{constraint_table, parse_constraints};

/// The first step of the argument that failed, for an inconclusive report.
fn first_failure(r: &NonexistenceReport) -> String {
    if let Some(c) = r.cases.iter().find(|c| !c.state.zeroes_s1_s2()) {
        return format!("propagation: case {} does not zero out S1 and S2", c.state.seed);
    }
    if let Some(c) = r.cases.iter().find(|c| !c.replays_on_generated) {
        return format!("propagation: case {} does not replay on the generated constraints", c.state.seed);
    }
    if !(r.generated.annihilated_shells.contains(&18) && r.generated.annihilated_shells.contains(&20)) {
        return "generation: shells 18 and 20 do not cancel".into();
    }
    if !r.mu_plus.only_shell_five() {
        return format!("mu_plus elimination: coupled shells {:?}", r.mu_plus.coupled_candidates());
    }
    if !r.supports.mixed.is_empty() {
        return format!("supports: {} admissible supports mix S3 with S1 or S2", r.supports.mixed.len());
    }
    "energy: u_+ coefficient is not positive".into()
}

pub fn run(ctx: &Context, log: &mut dyn Write) -> Result<NonexistenceReport> {
    let c = &ctx.config;
    let reference = match &c.reference_constraints {
        Some(p) => {
            let path = ctx.base.join(p);
            let text = fs::read_to_string(&path).map_err(|e| LabError::io(&path, e))?;
            parse_constraints(&text)?
        }
        None => transcribed_constraints(),
    };
    let report = verify_nonexistence(&reference).map_err(|e| LabError::Verification(e.to_string()))?;
    let mut t = Table::new(&["line"]);
    for l in &report.transcript {
        t.push(vec![l.clone()]);
    }
    t.write(&ctx.out, output_name(&c.outputs.transcript, "nonexistence_transcript.tsv"))?;
    constraint_table(&report.matched).write(&ctx.out, output_name(&c.outputs.constraints, "constraints.tsv"))?;
    say(log, format!("constraints: {} generated, matching the reference list", report.matched.len()));
    say(log, format!("propagation: {} cases", report.cases.len()));
    say(log, report.transcript.last().cloned().unwrap_or_default());
    match report.verdict {
        NonexistenceVerdict::Nonexistent => Ok(report),
        NonexistenceVerdict::Inconclusive => Err(LabError::Verification(first_failure(&report))),
    }
}
