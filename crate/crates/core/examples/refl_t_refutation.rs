//! On a frame with irreflexive points, refutes []P => P at each of them by
//! taking P to be everything except the point itself.
use modalkit::correspondence::{complement_of, irreflexive_points, refute_on_frame, AxiomId};
use modalkit::semantics::{eval, Instance};
use modalkit::{Budget, Env, Frame, PropModel};

fn main() -> modalkit::Result<()> {
    let fr = Frame::new(
        vec!["w0".into(), "w1".into(), "w2".into()],
        &[("w0", "w1"), ("w1", "w1"), ("w1", "w2"), ("w2", "w0")],
    )?;
    let t = AxiomId::T.scheme();
    let base = PropModel::empty(fr.clone());
    for w in irreflexive_points(&fr) {
        let p = complement_of(&fr, w);
        let inst = Instance::with_schemes(&base, &[("P".into(), p)]);
        let holds = eval(&inst, &t, w, &Env::new())?;
        println!(
            "at {}: P = {:?}, T holds: {holds}",
            fr.world_name(w),
            fr.names_of(p)
        );
    }
    if let Some(wit) = refute_on_frame(&fr, &t, &Budget::default())? {
        println!("least witness: {}", wit.to_json(&fr, None));
    }
    Ok(())
}
