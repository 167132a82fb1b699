use std::time::Duration;

use cadprep::cad::CadConfig;
use cadprep::harness::{corpus, parse_csv, records_to_csv, run_experiment, sort_records, ExperimentRecord, Status};
use cadprep::pipeline::Label;
use proptest::prelude::*;

fn record() -> impl Strategy<Value = ExperimentRecord> {
    (
        "[a-z0-9, \"-]{1,12}",
        prop::sample::select(Label::ALL.to_vec()),
        "[a-z]>[a-z]>[a-z]",
        prop::sample::select(Status::ALL.to_vec()),
        (0.0f64..1e7, 0.0f64..1e3, 0.0f64..1e7),
        prop::option::of(0u64..1_000_000),
        prop::option::of(0usize..100),
    )
        .prop_map(|(problem, label, order, status, (gb_ms, reduce_ms, cad_ms), cells, tnoi)| ExperimentRecord {
            problem,
            label,
            order,
            status,
            gb_ms,
            reduce_ms,
            cad_ms,
            cells,
            tnoi,
        })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-5 * a.abs().max(b.abs()) + 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn csv_round_trip(mut records in prop::collection::vec(record(), 0..12)) {
        let text = records_to_csv(&records);
        let back = parse_csv(text.as_bytes()).unwrap();
        sort_records(&mut records);
        prop_assert_eq!(back.len(), records.len());
        for (a, b) in records.iter().zip(&back) {
            prop_assert!(a.same_outcome(b), "{:?} vs {:?}", a, b);
            prop_assert!(close(a.gb_ms, b.gb_ms) && close(a.reduce_ms, b.reduce_ms) && close(a.cad_ms, b.cad_ms));
        }
    }
}

#[test]
fn phase_times_add_up() {
    let p = corpus::load("spheres-12-lt").unwrap().unwrap();
    let recs = run_experiment("spheres-12-lt", &p, &Label::ALL, Duration::from_secs(60), &CadConfig::default()).unwrap();
    assert_eq!(recs.len(), 6);
    let text = records_to_csv(&recs);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    for row in rows.records() {
        let row = row.unwrap();
        let f = |i: usize| row[i].parse::<f64>().unwrap();
        let (gb, reduce, cad, total) = (f(4), f(5), f(6), f(7));
        assert!(close(total, gb + reduce + cad), "{total} != {gb} + {reduce} + {cad}");
    }
    for r in &recs {
        assert_eq!(r.status, Status::Ok);
        assert_eq!(r.total_ms(), r.gb_ms + r.reduce_ms + r.cad_ms);
    }
}
