use lomo::container::{decode, encode, read_model, write_model, ModelFile};
use lomo::lseq::{format_lseq, parse_lseq, read_lseq, write_lseq};
use lomo_core::{Classifier, Model, ModelKind, ModelParts, MulticlassModel, Pooling, SequenceSample};
use proptest::prelude::*;
use std::path::Path;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
        Just(f64::MAX),
    ]
}

fn samples() -> impl Strategy<Value = Vec<SequenceSample>> {
    (1usize..5).prop_flat_map(|d| {
        prop::collection::vec(
            (1usize..6, -3i64..4, prop::option::of("[a-z0-9_]{1,6}")).prop_flat_map(move |(n, label, group)| {
                prop::collection::vec(finite(), n * d).prop_map(move |data| (label, group.clone(), data))
            }),
            1..6,
        )
        .prop_map(move |rows| {
            rows.into_iter()
                .enumerate()
                .map(|(i, (label, group, data))| SequenceSample::new(format!("seq{i}"), label, group, d, data).unwrap())
                .collect()
        })
    })
}

fn bits(samples: &[SequenceSample]) -> Vec<u64> {
    samples.iter().flat_map(|s| s.data().iter().map(|v| v.to_bits())).collect()
}

proptest! {
    #[test]
    fn lseq_round_trip_is_bit_exact(data in samples()) {
        let text = format_lseq(&data).unwrap();
        let back = parse_lseq(&text, Path::new("mem")).unwrap();
        prop_assert_eq!(bits(&back), bits(&data));
        prop_assert_eq!(back, data);
    }

    #[test]
    fn container_round_trip(values in prop::collection::vec(-1e6f64..1e6, 64), events in 1usize..4, dim in 1usize..5, classes in 1usize..4, seed in any::<u64>()) {
        let costs = lomo_core::factorial(events);
        let make = |offset: usize| {
            let take = |n: usize, at: usize| (0..n).map(|i| values[(at + i) % values.len()]).collect::<Vec<_>>();
            Model::from_parts(ModelParts {
                events,
                dim,
                templates: take(events * dim, offset),
                ordering_costs: take(costs, offset + 7),
                global_template: Some(take(dim, offset + 3)),
                gamma_g: 0.3,
                pooling: Pooling::Max,
                coverage: offset,
            })
            .unwrap()
        };
        let classifier = if classes == 1 {
            Classifier::Binary(make(0))
        } else {
            Classifier::Multiclass(MulticlassModel::new((0..classes as i64).collect(), (0..classes).map(make).collect()).unwrap())
        };
        let file = ModelFile { kind: ModelKind::Alomo, seed, classifier };
        let bytes = encode(&file);
        prop_assert_eq!(&bytes[..5], b"LOMO1");
        prop_assert_eq!(decode(&bytes).unwrap(), file);
    }
}

#[test]
fn files_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let data = vec![
        SequenceSample::new("a", 1, Some("g".into()), 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
        SequenceSample::new("b", -1, None, 2, vec![1e-310, -5.5]).unwrap(),
    ];
    let path = dir.path().join("x.lseq");
    write_lseq(&path, &data).unwrap();
    assert_eq!(read_lseq(&path).unwrap(), data);

    let model = Model::zeros(2, 3, 0.0, Pooling::Mean, 1).unwrap();
    let file = ModelFile { kind: ModelKind::Lomo, seed: 9, classifier: Classifier::Binary(model) };
    let mpath = dir.path().join("m.lomo");
    write_model(&mpath, &file).unwrap();
    assert_eq!(read_model(&mpath).unwrap(), file);
}

#[test]
fn header_dimension_disagreeing_with_a_row_is_reported_at_that_row() {
    let text = "lseq 1 4\n# c\nseq s 1 - 3\n1 2 3 4\n1 2 3 4\n1 2 3\n";
    match parse_lseq(text, Path::new("f.lseq")) {
        Err(lomo::Error::Parse { line, .. }) => assert_eq!(line, 6),
        other => panic!("{other:?}"),
    }
}
