//! Checks the propositional axioms against their frame properties on every
//! frame with up to three worlds and prints a summary table.
use modalkit::correspondence::{axiom_report, AxiomId};
use modalkit::search::all_frames;
use modalkit::Budget;

fn main() -> modalkit::Result<()> {
    let budget = Budget::default();
    let frames = all_frames(3);
    let mut valid_on = [0usize; AxiomId::PROPOSITIONAL.len()];
    let mut inconsistent = 0;
    for fr in &frames {
        let report = axiom_report(fr, &budget)?;
        if !report.consistent() {
            inconsistent += 1;
        }
        for (i, id) in AxiomId::PROPOSITIONAL.iter().enumerate() {
            if report.entries[id].verdict.holds {
                valid_on[i] += 1;
            }
        }
    }
    println!("{} frames, {} inconsistent", frames.len(), inconsistent);
    for (id, count) in AxiomId::PROPOSITIONAL.iter().zip(valid_on) {
        let property = id.property().map_or("(every frame)", |p| p.name());
        println!(
            "{:>3}  {:<40} valid on {count:>6}  {property}",
            id.key(),
            id.scheme_text()
        );
    }
    Ok(())
}
