use proptest::prelude::*;

use cvpolar::sim::frozen::{format_frozen, parse_frozen};
use cvpolar::{decode_list, decode_sc, encode, encode_inverse, CodeSpec, ListOptions, Mode};

fn spec_strategy(n: usize) -> impl Strategy<Value = CodeSpec> {
    proptest::collection::vec(any::<bool>(), n).prop_map(move |mask| {
        let frozen: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        CodeSpec::from_frozen(n, &frozen).unwrap()
    })
}

proptest! {
    #[test]
    fn encode_is_invertible(u in proptest::collection::vec(0u8..2, 64)) {
        prop_assert_eq!(encode_inverse(&encode(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn encode_is_linear(
        a in proptest::collection::vec(0u8..2, 32),
        b in proptest::collection::vec(0u8..2, 32),
    ) {
        let sum: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let lhs = encode(&sum).unwrap();
        let rhs: Vec<u8> = encode(&a).unwrap().iter().zip(encode(&b).unwrap()).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn frozen_files_round_trip(spec in spec_strategy(32)) {
        prop_assert_eq!(parse_frozen(&format_frozen(&spec)).unwrap(), spec);
    }

    #[test]
    fn noiseless_frames_decode(
        spec in spec_strategy(64),
        seed in any::<u64>(),
        magnitude in 0.01f64..50.0,
    ) {
        let message: Vec<u8> = (0..spec.k()).map(|i| ((seed >> (i % 64)) & 1) as u8).collect();
        let y: Vec<f64> = spec
            .encode_message(&message)
            .unwrap()
            .iter()
            .map(|&b| if b == 1 { magnitude } else { -magnitude })
            .collect();
        for mode in [Mode::Sf, Mode::Eff] {
            prop_assert_eq!(&decode_sc(&spec, &y, mode).unwrap().message, &message);
        }
        let out = decode_list(&spec, &y, 4, ListOptions::default()).unwrap();
        prop_assert_eq!(&out.message, &message);
        prop_assert_eq!(out.score, 0.0);
    }

    #[test]
    fn reduced_count_is_input_independent(y in proptest::collection::vec(-20.0f64..20.0, 128)) {
        let spec = CodeSpec::from_frozen(128, &[0, 1, 2, 3]).unwrap();
        prop_assert_eq!(decode_sc(&spec, &y, Mode::Eff).unwrap().ops.total(), 8344);
    }
}
