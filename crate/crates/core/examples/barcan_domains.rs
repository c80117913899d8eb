//! Evaluates the Barcan formula and its converse on frames with growing,
//! shrinking and constant domains.
use modalkit::correspondence::barcan_report;
use modalkit::{Budget, DomainFrame, Frame};

fn main() -> modalkit::Result<()> {
    let fr = Frame::new(vec!["w0".into(), "w1".into()], &[("w0", "w1")])?;
    let domain = vec!["a".to_string(), "b".to_string()];
    let cases = [
        ("growing", vec![0b01, 0b11]),
        ("shrinking", vec![0b11, 0b01]),
        ("constant", vec![0b11, 0b11]),
    ];
    for (label, exists) in cases {
        let df = DomainFrame::new(fr.clone(), domain.clone(), exists)?;
        let report = barcan_report(&df, &Budget::default())?;
        println!(
            "{label:10} BF {:5} CBF {:5} consistent {}",
            report.bf.holds,
            report.cbf.holds,
            report.consistent()
        );
        for (name, v) in [("BF", &report.bf), ("CBF", &report.cbf)] {
            if let Some(w) = &v.witness {
                println!("  {name} witness {}", w.to_json(&fr, Some(&df)));
            }
        }
    }
    Ok(())
}
