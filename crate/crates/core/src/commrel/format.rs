//! Text format for commutator relations, mirroring the ring format:
//!
//! ```text
//! commrel rank=4 modulus=2
//! module 1 2: 2
//! ...
//! cmap 1 2 3: (0,0) -> [1]
//! ```
//!
//! Every off-diagonal module is listed; only nonzero bracket values are.

use super::{a2_triples, CommRelData, CommRelError};
use crate::exact_linalg::FinAbGroup;
use crate::peirce::format::{parse_raw, syntax, write_raw, FormatError, Keywords};
use crate::peirce::PeirceError;

pub(crate) const COMMREL: Keywords = Keywords {
    header: "commrel",
    group: "module",
    map: "cmap",
};

pub fn write_commrel(d: &CommRelData) -> String {
    write_raw(
        &COMMREL,
        d.rank(),
        d.modulus(),
        |i, j| (i != j).then(|| d.module(i, j)),
        |i, j, k| d.maps().get(&(i, j, k)),
    )
}

fn to_format(e: CommRelError) -> FormatError {
    match e {
        CommRelError::Linalg(e) => FormatError::Ring(PeirceError::Linalg(e)),
        other => syntax(0, other.to_string()),
    }
}

/// Parses and validates, including associativity of the brackets.
pub fn parse_commrel(text: &str) -> Result<CommRelData, FormatError> {
    let d = parse_commrel_unchecked(text)?;
    if let Some((indices, generators)) = d.associativity_failure() {
        return Err(to_format(CommRelError::NotAssociative { indices, generators }));
    }
    Ok(d)
}

pub fn parse_commrel_unchecked(text: &str) -> Result<CommRelData, FormatError> {
    let raw = parse_raw(text, &COMMREL)?;
    let l = raw.rank;
    if let Some(&(i, _)) = raw.groups.keys().find(|(i, j)| i == j) {
        return Err(syntax(0, format!("diagonal module {} {} is not allowed", i + 1, i + 1)));
    }
    let valid = a2_triples(l);
    if let Some(&(i, j, k)) = raw.entries.keys().find(|t| !valid.contains(t)) {
        return Err(syntax(0, format!("cmap {} {} {} needs distinct indices", i + 1, j + 1, k + 1)));
    }
    let modules: Vec<Vec<FinAbGroup>> = (0..l).map(|i| (0..l).map(|j| raw.group(i, j)).collect()).collect();
    let mut maps = std::collections::BTreeMap::new();
    for (i, j, k) in valid {
        maps.insert(
            (i, j, k),
            raw.bilinear((i, j, k), &modules[i][j], &modules[j][k], &modules[i][k])?,
        );
    }
    CommRelData::new_unchecked(raw.modulus, modules, maps).map_err(to_format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commrel::extract;
    use crate::peirce::{grouped_mat_ring, mat_ring, FinRing};

    #[test]
    fn roundtrip_is_byte_exact() {
        let d = extract(&mat_ring(4, &FinRing::cyclic(3)).unwrap());
        let text = write_commrel(&d);
        assert!(text.starts_with("commrel rank=4 modulus=3\nmodule 1 2: 3\n"));
        assert!(!text.contains("module 1 1"));
        assert!(text.contains("cmap 1 2 3: (0,0) -> [1]\n"));
        let back = parse_commrel(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(write_commrel(&back), text);
    }

    #[test]
    fn grouped_roundtrip() {
        let r = grouped_mat_ring(5, 2, &[vec![0], vec![1], vec![2], vec![3, 4]]).unwrap();
        let d = extract(&r);
        assert_eq!(parse_commrel(&write_commrel(&d)).unwrap(), d);
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(parse_commrel("commrel rank=3 modulus=2\nmodule 1 1: 2\n").is_err());
        assert!(parse_commrel("commrel rank=3 modulus=2\nmodule 1 2: 2\ncmap 1 2 1: (0,0) -> [1]\n").is_err());
        assert!(parse_commrel("commrel rank=3 modulus=2\nmodule 1 2: 2\n").is_ok());
    }
}
