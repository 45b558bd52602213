//! Bundled reference data: the published table of `J_n`, the orbit appendix
//! and the list of orders given by the nontrivial families.

use std::collections::BTreeMap;

use num_bigint::BigUint;

const TABLE1: &str = include_str!("../data/table1.txt");
const APPENDIX: &str = include_str!("../data/appendix.txt");
const FAMILY_N_LIST: &str = include_str!("../data/family_n_list.txt");

/// Evaluates a count as printed, e.g. `2^{21}+15\cdot 2^{11}` or `134`.
pub fn parse_printed_count(expr: &str) -> Result<BigUint, String> {
    let mut total = BigUint::default();
    for term in expr.split('+') {
        let mut value = BigUint::from(1u8);
        for factor in term.split("\\cdot") {
            let f = factor.trim();
            let v = match f.split_once('^') {
                Some((base, exp)) => {
                    let base: u32 = base.trim().parse().map_err(|_| format!("bad base in {expr:?}"))?;
                    let exp = exp.trim().trim_start_matches('{').trim_end_matches('}');
                    let exp: u32 = exp.parse().map_err(|_| format!("bad exponent in {expr:?}"))?;
                    BigUint::from(base).pow(exp)
                }
                None => f.parse::<BigUint>().map_err(|_| format!("bad factor {f:?} in {expr:?}"))?,
            };
            value *= v;
        }
        total += value;
    }
    Ok(total)
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// `n ↦ J_n` for `1 ≤ n ≤ 51`.
pub fn table1() -> BTreeMap<usize, BigUint> {
    data_lines(TABLE1)
        .map(|line| {
            let (n, expr) = line.split_once(' ').expect("table row has two fields");
            let n = n.parse().expect("table order");
            (n, parse_printed_count(expr).expect("table value"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixRow {
    pub n: usize,
    pub orbit_size: u64,
    pub representative: String,
}

pub fn appendix() -> Vec<AppendixRow> {
    data_lines(APPENDIX)
        .map(|line| {
            let f: Vec<&str> = line.split_whitespace().collect();
            assert_eq!(f.len(), 3, "appendix row {line:?}");
            AppendixRow {
                n: f[0].parse().expect("appendix order"),
                orbit_size: f[1].parse().expect("appendix orbit size"),
                representative: f[2].to_string(),
            }
        })
        .collect()
}

/// The appendix rows for one order, in printed order. The appendix is
/// complete for `n ≤ 50`, so an empty list there means no nontrivial solution.
pub fn appendix_for(n: usize) -> Vec<(u64, String)> {
    appendix()
        .into_iter()
        .filter(|r| r.n == n)
        .map(|r| (r.orbit_size, r.representative))
        .collect()
}

pub const APPENDIX_MAX_N: usize = 50;

/// The printed list of orders `n ≤ 10000` with nontrivial bisections from
/// the families.
pub fn family_n_list() -> Vec<usize> {
    data_lines(FAMILY_N_LIST)
        .map(|l| l.parse().expect("family order"))
        .collect()
}

pub const FAMILY_N_LIST_LIMIT: usize = 10_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_expressions() {
        assert_eq!(parse_printed_count("134").unwrap(), BigUint::from(134u32));
        assert_eq!(parse_printed_count("2^2").unwrap(), BigUint::from(4u32));
        assert_eq!(parse_printed_count("2^{7}+2^4").unwrap(), BigUint::from(144u32));
        assert_eq!(
            parse_printed_count("2^{21}+15\\cdot 2^{11}").unwrap(),
            BigUint::from((1u64 << 21) + 15 * (1 << 11))
        );
        assert!(parse_printed_count("2^{x}").is_err());
    }

    #[test]
    fn table_is_complete() {
        let t = table1();
        assert_eq!(t.len(), 51);
        assert_eq!(t.keys().copied().collect::<Vec<_>>(), (1..=51).collect::<Vec<_>>());
        assert_eq!(t[&13], BigUint::from(144u32));
        assert_eq!(t[&33], BigUint::from((1u64 << 17) + (1 << 14)));
        assert_eq!(t[&35], BigUint::from((1u64 << 18) + 24));
    }

    #[test]
    fn appendix_rows_match_table() {
        // orbit sizes per order add up to the nontrivial part of the table
        let t = table1();
        for n in 1..=APPENDIX_MAX_N {
            let rows = appendix_for(n);
            let sum: u64 = rows.iter().map(|r| r.0).sum();
            let trivial = if n % 2 == 1 { 1u64 << ((n + 1) / 2) } else { 2 };
            assert_eq!(BigUint::from(sum + trivial), t[&n], "n={n}");
            for (_, bits) in rows {
                assert_eq!(bits.len(), n + 1, "n={n}");
            }
        }
    }

    #[test]
    fn family_list_shape() {
        let l = family_n_list();
        assert_eq!(l.len(), 100);
        assert!(l.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*l.last().unwrap(), 9998);
    }
}
