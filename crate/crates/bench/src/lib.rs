//! Fixtures shared by the benchmarks.

use segment_upgrade::algebra::{BigFloat, FloatField, MonomialOrder, PolyRing, Polynomial};
use segment_upgrade::datagen::{gen_float_instance, gen_template_instance, GenerationConfig};
use segment_upgrade::solver::{build_template, SolverTemplate};
use segment_upgrade::upgrade::{build_system, SegmentInstance};

/// A solver for `n` segments and an exact data set it applies to.
pub struct Fixture {
    pub template_instance: SegmentInstance,
    pub template: SolverTemplate,
    pub data: SegmentInstance,
}

pub fn fixture(n: usize) -> Fixture {
    let template_instance = gen_template_instance(&GenerationConfig::new(n, 0)).expect("template instance");
    let template = build_template(&template_instance, MonomialOrder::default()).expect("template");
    let data = gen_float_instance(&GenerationConfig::new(n, 1000)).expect("float instance");
    Fixture {
        template_instance,
        template,
        data,
    }
}

/// The float system of `data` at `prec` bits in the template's order.
pub fn float_system(f: &Fixture, prec: u32) -> Vec<Polynomial<BigFloat>> {
    let field = FloatField::new(prec);
    let ring = PolyRing::new(field, f.template.order);
    build_system(&ring, &f.data.segments_in(&field).expect("decimal data"), f.data.anchor).expect("system")
}
