mod common;

use common::{assert_schema, data, read_json, schema_rejects};
use random_chords::energy::{expected_half_sum, DEFAULT_TRUNCATION};
use random_chords::exact::{prob_closed_form_r1, prob_enumerate};
use random_chords::measure::{DiscreteMeasure, MixtureMeasure};
use random_chords::montecarlo::estimate_two_chord;
use random_chords::optimize::{maximize, Objective, OptimizeConfig};
use random_chords::verify::{self, Suite, VerifyOptions};
use serde_json::{json, to_value};

#[test]
fn shipped_measures_match_schema() {
    for name in [
        "antipodal",
        "square",
        "triangle",
        "uniform",
        "delta",
        "mixed",
        "bad_mass",
    ] {
        // bad_mass is well formed; only its total mass is wrong
        assert_schema("measure", &read_json(&data(&format!("{name}.json"))));
    }
}

#[test]
fn measure_schema_rejects_malformed_input() {
    assert!(schema_rejects(
        "measure",
        &json!({"atoms": [{"angle_turns": 0.1}]})
    ));
    assert!(schema_rejects(
        "measure",
        &json!({"atoms": [{"angle_turns": 0.1, "weight": -1.0}]})
    ));
    assert!(schema_rejects("measure", &json!({"atoms": [], "extra": 1})));
}

#[test]
fn library_outputs_match_schemas() {
    let m = DiscreteMeasure::regular_polygon(5).unwrap();
    assert_schema(
        "eval_report",
        &to_value(prob_closed_form_r1(&m).unwrap()).unwrap(),
    );
    assert_schema(
        "eval_report",
        &to_value(prob_enumerate(&m, 0.5, false).unwrap()).unwrap(),
    );

    let u = MixtureMeasure::uniform();
    assert_schema(
        "mc_estimate",
        &to_value(estimate_two_chord(&u, 0.5, 10_000, 3, true).unwrap()).unwrap(),
    );
    assert_schema(
        "energy_report",
        &to_value(expected_half_sum(&u, DEFAULT_TRUNCATION).unwrap()).unwrap(),
    );

    let cfg = OptimizeConfig {
        n_atoms: 4,
        restarts: 2,
        anneal_steps: 50,
        ..OptimizeConfig::new(Objective::OneChord, 0.3)
    };
    let report = maximize(Objective::OneChord, &cfg).unwrap();
    assert_schema("optimum_report", &to_value(&report).unwrap());

    let checks = verify::run(Suite::El, &VerifyOptions::new(0)).unwrap();
    assert_schema("verify_summary", &to_value(&checks).unwrap());
}

#[test]
fn measure_serialization_round_trips_through_schema() {
    let m = MixtureMeasure::from_json(&std::fs::read_to_string(data("mixed.json")).unwrap()).unwrap();
    let v = to_value(m.to_spec()).unwrap();
    assert_schema("measure", &v);
    let d = DiscreteMeasure::antipodal_pair(0.2).unwrap();
    assert_schema("measure", &to_value(&d).unwrap());
}
