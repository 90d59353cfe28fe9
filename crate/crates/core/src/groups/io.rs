use std::path::Path;

use serde::{Deserialize, Serialize};

use super::perm::{Perm, PermGroup};
use crate::error::Result;

/// On-disk permutation group: 0-based image lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn from_group(name: &str, g: &PermGroup) -> Self {
        GroupFile {
            name: name.to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }

    pub fn build(&self) -> Result<PermGroup> {
        let gens = self
            .generators
            .iter()
            .map(|v| Perm::new(v.clone()))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::closure(self.degree, gens)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;

    #[test]
    fn json_round_trip() {
        let text = r#"{"name": "d8", "degree": 4, "generators": [[1,2,3,0],[2,1,0,3]]}"#;
        let f: GroupFile = serde_json::from_str(text).unwrap();
        let g = f.build().unwrap();
        assert_eq!(g.order(), 8);
        let back = GroupFile::from_group("d8", &g);
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_non_permutation() {
        let f = GroupFile {
            name: "bad".into(),
            degree: 3,
            generators: vec![vec![0, 0, 1]],
        };
        assert!(f.build().is_err());
    }
}
