use hardy_lab::lab::{generate, report, run, run_suite, ParamRanges, ReportFormat, TheoremId};

fn main() -> hardy_lab::error::Result<()> {
    let ranges = ParamRanges::default();

    let scenario = generate(11, TheoremId::Thm32, &ranges)?;
    let rec = run(&scenario, None);
    println!("{} -> {:?}", rec.scenario_id, rec.outcome);
    for c in &rec.checks {
        println!("  {:<28} {:.2e} (tol {:.0e}){}", c.name, c.value, c.tol, if c.gating { "" } else { "  diagnostic" });
    }

    let mut records = Vec::new();
    for th in [TheoremId::Lemma39, TheoremId::Thm313, TheoremId::Thm45] {
        records.extend(run_suite(th, 20, 0, &ranges, None)?);
    }
    print!("{}", report(&records).render(ReportFormat::Text)?);
    Ok(())
}
