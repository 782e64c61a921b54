//! Chow groups of split quadrics and the image of CH^p(X) in CH^p(X̄) for
//! anisotropic X.

use serde::{Deserialize, Serialize};

use super::ChowError;

/// CH^p of a completely split quadric of dimension d.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitChowRow {
    pub d: u32,
    pub p: u32,
    /// Free generators.
    pub generators: Vec<String>,
    /// Second basis of the middle row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alt_generators: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
}

fn h(p: u32) -> String {
    format!("h^{p}")
}

fn l(j: u32) -> String {
    format!("l_{j}")
}

fn check(d: u32, p: u32) -> Result<(), ChowError> {
    if d == 0 || p > d {
        Err(ChowError::Range { d, p })
    } else {
        Ok(())
    }
}

pub fn split_chow_structure(d: u32, p: u32) -> Result<SplitChowRow, ChowError> {
    check(d, p)?;
    let row = if 2 * p < d {
        SplitChowRow {
            d,
            p,
            generators: vec![h(p)],
            alt_generators: None,
            relation: None,
        }
    } else if 2 * p > d {
        SplitChowRow {
            d,
            p,
            generators: vec![l(d - p)],
            alt_generators: None,
            relation: Some(format!("{} = 2*{}", h(p), l(d - p))),
        }
    } else {
        SplitChowRow {
            d,
            p,
            generators: vec![h(p), l(p)],
            alt_generators: Some(vec![l(p), format!("l'_{p}")]),
            relation: Some(format!("{} + l'_{p} = {}", l(p), h(p))),
        }
    };
    Ok(row)
}

pub fn split_chow_table(d: u32) -> Result<Vec<SplitChowRow>, ChowError> {
    (0..=d).map(|p| split_chow_structure(d, p)).collect()
}

/// Image of CH^p(X) in CH^p(X̄) for anisotropic X.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnisotropicImage {
    pub d: u32,
    pub p: u32,
    pub image: Vec<String>,
    pub ambient: Vec<String>,
    /// Exponent r in 2^r l_p for the middle row with trivial Arf
    /// invariant; only known for d = 4.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
}

/// `trivial_arf` is only consulted for the middle row d = 2p.
pub fn anisotropic_image(d: u32, p: u32, trivial_arf: bool) -> Result<AnisotropicImage, ChowError> {
    let split = split_chow_structure(d, p)?;
    let (image, r) = if 2 * p < d {
        (vec![h(p)], None)
    } else if 2 * p > d {
        (vec![format!("2*{}", l(d - p))], None)
    } else if !trivial_arf {
        (vec![h(p)], None)
    } else if d == 4 {
        (vec![h(p), format!("4*{}", l(p))], Some(2))
    } else {
        (vec![h(p), format!("2^r*{}", l(p))], None)
    };
    Ok(AnisotropicImage {
        d,
        p,
        image,
        ambient: split.generators,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows() {
        let r = split_chow_structure(3, 2).unwrap();
        assert_eq!(r.generators, vec!["l_1"]);
        assert_eq!(r.relation.as_deref(), Some("h^2 = 2*l_1"));
        let r = split_chow_structure(4, 2).unwrap();
        assert_eq!(r.generators, vec!["h^2", "l_2"]);
        assert_eq!(r.alt_generators.unwrap(), vec!["l_2", "l'_2"]);
        assert_eq!(r.relation.as_deref(), Some("l_2 + l'_2 = h^2"));
        assert!(split_chow_structure(3, 4).is_err());
        let img = anisotropic_image(4, 2, true).unwrap();
        assert_eq!(img.image, vec!["h^2", "4*l_2"]);
        assert_eq!(img.r, Some(2));
        assert_eq!(anisotropic_image(6, 3, true).unwrap().r, None);
    }
}
