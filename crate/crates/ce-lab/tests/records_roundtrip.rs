//! Round-trip and pipeline-identity properties of the record file format.

use ce_core::{
    lrm_mean_estimate, sic_mom_k2_estimate, simulate_lrm, simulate_sic, EnsembleKind, PureState,
    SubsetSpec,
};
use ce_lab::record::{parse_record, serialize_record, Record};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn lrm_records_round_trip(
        n in 1u32..=3,
        l in 1u64..=20,
        k in 2u64..=4,
        haar in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let state = PureState::w(n).unwrap();
        let subset = SubsetSpec::full(n).unwrap();
        let ensemble = if haar { EnsembleKind::HaarU2 } else { EnsembleKind::CliffordU2 };
        let rec = Record::Lrm(simulate_lrm(&state, &subset, l, k, ensemble, seed).unwrap());
        let text = serialize_record(&rec);
        let parsed = parse_record(&text).unwrap();
        prop_assert_eq!(&parsed, &rec);
        prop_assert_eq!(serialize_record(&parsed), text);
    }

    #[test]
    fn sic_records_round_trip(
        n in 1u32..=3,
        m in 2u64..=48,
        seed in any::<u64>(),
    ) {
        let state = PureState::w(n).unwrap();
        let subset = SubsetSpec::full(n).unwrap();
        let rec = Record::Sic(simulate_sic(&state, &subset, m, seed).unwrap());
        let text = serialize_record(&rec);
        let parsed = parse_record(&text).unwrap();
        prop_assert_eq!(&parsed, &rec);
        prop_assert_eq!(serialize_record(&parsed), text);
    }
}

#[test]
fn ten_thousand_line_record_is_byte_stable() {
    let state = PureState::ghz(3).unwrap();
    let subset = SubsetSpec::full(3).unwrap();
    let rec = Record::Lrm(
        simulate_lrm(&state, &subset, 10_000, 2, EnsembleKind::CliffordU2, 404).unwrap(),
    );
    let text = serialize_record(&rec);
    assert_eq!(text.lines().count(), 10_000 + 11);
    let reparsed = parse_record(&text).unwrap();
    assert_eq!(serialize_record(&reparsed), text);
}

#[test]
fn reloaded_records_reproduce_estimates_bitwise() {
    let state = PureState::ghz(3).unwrap();
    let subset = SubsetSpec::full(3).unwrap();

    let lrm = simulate_lrm(&state, &subset, 2400, 2, EnsembleKind::CliffordU2, 7).unwrap();
    let direct = lrm_mean_estimate(&lrm).unwrap();
    let reloaded = match parse_record(&serialize_record(&Record::Lrm(lrm))).unwrap() {
        Record::Lrm(r) => r,
        _ => unreachable!(),
    };
    let from_file = lrm_mean_estimate(&reloaded).unwrap();
    assert_eq!(direct.estimate.to_bits(), from_file.estimate.to_bits());

    let sic = simulate_sic(&state, &subset, 2 * 24 * 10, 7).unwrap();
    let direct = sic_mom_k2_estimate(&sic, 0.05).unwrap();
    let reloaded = match parse_record(&serialize_record(&Record::Sic(sic))).unwrap() {
        Record::Sic(r) => r,
        _ => unreachable!(),
    };
    let from_file = sic_mom_k2_estimate(&reloaded, 0.05).unwrap();
    assert_eq!(direct.estimate.to_bits(), from_file.estimate.to_bits());
    assert_eq!(direct.batch_means, from_file.batch_means);
}

#[test]
fn haar_record_estimates_survive_reload_bitwise() {
    let state = PureState::w(2).unwrap();
    let subset = SubsetSpec::full(2).unwrap();
    let rec = simulate_lrm(&state, &subset, 500, 2, EnsembleKind::HaarU2, 99).unwrap();
    let direct = lrm_mean_estimate(&rec).unwrap();
    let reloaded = match parse_record(&serialize_record(&Record::Lrm(rec))).unwrap() {
        Record::Lrm(r) => r,
        _ => unreachable!(),
    };
    let from_file = lrm_mean_estimate(&reloaded).unwrap();
    assert_eq!(direct.estimate.to_bits(), from_file.estimate.to_bits());
}

/// A hand-written minimal SIC file, the lab-data ingestion path.
#[test]
fn external_minimal_sic_file_runs() {
    let text = "format: ce-record/1\nkind: sic\nn: 1\nsubset: 1\nM: 4\nseed: none\ncreator: labstack 2.1\n\n1\n1\n2\n4\n";
    let record = parse_record(text).unwrap();
    match &record {
        Record::Sic(r) => {
            assert_eq!(r.shots, 4);
            assert_eq!(r.seed, None);
        }
        _ => panic!("expected SIC record"),
    }
    // δ = 0.78 gives N_B = 2, so M = 4 batches as 2×(B = 1) pairs.
    if let Record::Sic(r) = record {
        let est = sic_mom_k2_estimate(&r, 0.78).unwrap();
        assert_eq!(est.batch_means.as_ref().unwrap().len(), 2);
        assert!(est.estimate <= 1.0);
    }
}
