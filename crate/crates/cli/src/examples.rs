//! Built-in example documents: p1, wp, football, affine-quotient, product.

use num_bigint::BigInt;
use toric::exactlin::{rat_int, Rat};
use toric::fan::{affine_quotient, football, product, weighted_projective, StackyFan};

use crate::input::InputDoc;

pub fn build_example(name: &str, args: &[String]) -> Result<InputDoc, String> {
    match name {
        "p1" => {
            if !args.is_empty() {
                return Err("p1 takes no arguments".to_string());
            }
            let fan = weighted_projective(&[1, 1]).map_err(|e| e.to_string())?;
            Ok(doc_from_fan(&fan, first_coordinate_kahler(&fan)))
        }
        "wp" => {
            let weights = parse_ints(args, "wp expects positive integer weights")?;
            let fan = weighted_projective(&weights).map_err(|e| e.to_string())?;
            Ok(doc_from_fan(&fan, first_coordinate_kahler(&fan)))
        }
        "football" => {
            let rs = parse_ints(args, "football expects two positive integers")?;
            if rs.len() != 2 {
                return Err("football expects exactly two orders".to_string());
            }
            let fan = football(rs[0], rs[1]).map_err(|e| e.to_string())?;
            Ok(doc_from_fan(&fan, first_coordinate_kahler(&fan)))
        }
        "affine-quotient" => {
            if args.is_empty() {
                return Err(
                    "affine-quotient expects rays as comma-separated vectors, e.g. 1,0 1,3"
                        .to_string(),
                );
            }
            let rays: Result<Vec<Vec<BigInt>>, String> =
                args.iter().map(|a| parse_vector(a)).collect();
            let fan = affine_quotient(rays?).map_err(|e| e.to_string())?;
            let n = fan.n_rays();
            Ok(doc_from_fan(&fan, vec![rat_int(1); n]))
        }
        "product" => {
            if args.len() != 2 {
                return Err(
                    "product expects two factor specs, e.g. `product p1 p1` or `product wp:1,2 p1`"
                        .to_string(),
                );
            }
            let (fan_a, k_a) = build_factor(&args[0])?;
            let (fan_b, k_b) = build_factor(&args[1])?;
            let fan = product(&fan_a, &fan_b).map_err(|e| e.to_string())?;
            let mut kahler = k_a;
            kahler.extend(k_b);
            Ok(doc_from_fan(&fan, kahler))
        }
        other => Err(format!(
            "unknown example \"{other}\" (known: p1, wp, football, affine-quotient, product)"
        )),
    }
}

fn build_factor(spec: &str) -> Result<(StackyFan, Vec<Rat>), String> {
    let (name, args) = match spec.split_once(':') {
        Some((n, a)) => (
            n,
            a.split(',').map(|s| s.to_string()).collect::<Vec<_>>(),
        ),
        None => (spec, vec![]),
    };
    let doc = build_example(name, &args)?;
    let fan = crate::commands::fan_from_doc(&doc).map_err(|e| e.to_string())?;
    Ok((fan, doc.kahler))
}

fn parse_ints(args: &[String], msg: &str) -> Result<Vec<i64>, String> {
    if args.is_empty() {
        return Err(msg.to_string());
    }
    args.iter()
        .map(|a| a.parse::<i64>().map_err(|_| format!("{msg}: bad value \"{a}\"")))
        .collect()
}

fn parse_vector(arg: &str) -> Result<Vec<BigInt>, String> {
    arg.split(',')
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| format!("bad ray coordinate \"{s}\""))
        })
        .collect()
}

/// A Kahler class that pairs positively with every builder Mori generator:
/// weight 1 on the first ray, 0 elsewhere.
fn first_coordinate_kahler(fan: &StackyFan) -> Vec<Rat> {
    let mut k = vec![rat_int(0); fan.n_rays()];
    k[0] = rat_int(1);
    k
}

fn doc_from_fan(fan: &StackyFan, kahler: Vec<Rat>) -> InputDoc {
    assert!(
        fan.group().torsion().is_empty(),
        "builders produce free lattices"
    );
    InputDoc {
        rank: fan.dim(),
        torsion: vec![],
        rays: fan.rays().to_vec(),
        max_cones: fan.max_cones().to_vec(),
        extension: vec![],
        kahler,
        cutoff: Rat::from_integer(2.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::{parse, render};

    #[test]
    fn examples_round_trip_and_validate() {
        let cases: Vec<(&str, Vec<String>)> = vec![
            ("p1", vec![]),
            ("wp", vec!["1".into(), "2".into()]),
            ("wp", vec!["1".into(), "1".into(), "2".into()]),
            ("football", vec!["2".into(), "3".into()]),
            ("affine-quotient", vec!["1,0".into(), "1,3".into()]),
            ("product", vec!["p1".into(), "p1".into()]),
            ("product", vec!["wp:1,2".into(), "p1".into()]),
        ];
        for (name, args) in cases {
            let doc = build_example(name, &args).unwrap();
            let reparsed = parse(&render(&doc)).unwrap();
            assert_eq!(reparsed, doc, "{name} round trip");
            let fan = crate::commands::fan_from_doc(&doc).unwrap();
            assert!(fan.validate().is_valid(), "{name} validates");
            assert!(fan.check_kahler(&doc.kahler), "{name} kahler is valid");
        }
    }

    #[test]
    fn p1_matches_spec_document() {
        let doc = build_example("p1", &[]).unwrap();
        assert_eq!(doc.rank, 1);
        assert_eq!(doc.rays, vec![vec![BigInt::from(1)], vec![BigInt::from(-1)]]);
        assert_eq!(doc.max_cones, vec![vec![0], vec![1]]);
        assert_eq!(doc.kahler, vec![rat_int(1), rat_int(0)]);
    }
}
