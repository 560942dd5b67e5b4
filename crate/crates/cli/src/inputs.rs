//! Parsing of poset specifications and batch weight patterns.

use std::path::Path;

use ehrhart_core::poset::PosetJson;
use ehrhart_core::{parse_int_list, Error, Partition, Permutation, Poset, Result, WeightVector};

/// `chain:n`, `antichain:n`, `fence:n`, `shape:λ`, `perm:w` or `file:path`
/// (a JSON object `{"n": .., "covers": [[a, b], ..]}`).
pub fn parse_poset(spec: &str) -> Result<Poset> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("poset spec {spec:?} should look like fence:10")))?;
    let size = || -> Result<usize> {
        arg.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad size {arg:?} in {spec:?}")))
    };
    match kind.trim() {
        "chain" => Ok(Poset::chain(size()?)),
        "antichain" => Ok(Poset::antichain(size()?)),
        "fence" => Ok(Poset::fence(size()?)),
        "shape" => Poset::shape_poset(&arg.parse::<Partition>()?),
        "perm" => Ok(Poset::permutation_poset(&arg.parse::<Permutation>()?)),
        "file" => {
            let text = std::fs::read_to_string(Path::new(arg))
                .map_err(|e| Error::Parse(format!("cannot read {arg:?}: {e}")))?;
            let json: PosetJson =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad poset file {arg:?}: {e}")))?;
            Poset::from_json(&json)
        }
        other => Err(Error::Parse(format!(
            "unknown poset family {other:?}; expected chain, antichain, fence, shape, perm or file"
        ))),
    }
}

/// Substitutes `N` in a weight pattern and parses it. Each occurrence of
/// `N`, optionally followed by `+c` or `-c`, is replaced by its value, so
/// `"2,1^(N-2)"` at `N = 10` is `(2,1,1,1,1,1,1,1,1)`.
pub fn expand_weight_pattern(pattern: &str, n: u32) -> Result<WeightVector> {
    let bad = || Error::Parse(format!("bad weight pattern {pattern:?}"));
    let mut out = String::new();
    let chars: Vec<char> = pattern.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != 'N' {
            out.push(chars[i]);
            i += 1;
            continue;
        }
        let mut value = i64::from(n);
        i += 1;
        if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            let sign = if chars[i] == '+' { 1 } else { -1 };
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            let c: i64 = chars[start..end].iter().collect::<String>().parse().map_err(|_| bad())?;
            value += sign * c;
            i = end;
        }
        if value < 0 {
            return Err(bad());
        }
        out.push_str(&value.to_string());
    }
    WeightVector::new(&parse_int_list(&out)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns() {
        assert_eq!(expand_weight_pattern("1^N", 4).unwrap().entries(), &[1, 1, 1, 1]);
        assert_eq!(expand_weight_pattern("2,1^(N-2)", 5).unwrap().entries(), &[2, 1, 1, 1]);
        assert_eq!(expand_weight_pattern("N", 3).unwrap().entries(), &[3]);
        assert!(expand_weight_pattern("1^(N-5)", 3).is_err());
        assert!(expand_weight_pattern("x", 3).is_err());
    }

    #[test]
    fn poset_specs() {
        assert_eq!(parse_poset("chain:3").unwrap(), Poset::chain(3));
        assert_eq!(parse_poset("fence:10").unwrap().len(), 10);
        assert_eq!(parse_poset("shape:4,3,2,1").unwrap().len(), 10);
        assert_eq!(parse_poset("perm:2,1").unwrap(), Poset::antichain(2));
        assert!(parse_poset("fence").is_err());
        assert!(parse_poset("blob:3").is_err());
        assert!(parse_poset("perm:1,1").is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        std::fs::write(&path, r#"{"n":3,"covers":[[0,2],[1,2]]}"#).unwrap();
        let p = parse_poset(&format!("file:{}", path.display())).unwrap();
        assert_eq!(p.covers(), &[(0, 2), (1, 2)]);
        std::fs::write(&path, r#"{"n":3,"covers":[[2,0]]}"#).unwrap();
        assert!(parse_poset(&format!("file:{}", path.display())).is_err());
    }
}
