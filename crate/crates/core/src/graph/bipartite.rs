use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::Corpus;
use crate::error::{bail, Result};
use crate::graph::NodeAttrs;

/// Director–company incidence, one edge per seat.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    company_offsets: Vec<usize>,
    company_members: Vec<u32>,
    director_offsets: Vec<usize>,
    director_companies: Vec<u32>,
    director_attrs: Vec<NodeAttrs>,
}

impl BipartiteGraph {
    pub fn from_corpus(corpus: &Corpus) -> BipartiteGraph {
        let boards: Vec<&[u32]> = corpus.companies.iter().map(|c| c.board.as_slice()).collect();
        let attrs = corpus
            .directors
            .iter()
            .map(|d| NodeAttrs {
                director_id: d.director_id,
                gender: d.gender,
                age: d.age,
                country: d.inferred_country.clone(),
            })
            .collect();
        Self::assemble(&boards, attrs)
    }

    /// Builds from explicit boards over directors `0..attrs.len()`.
    /// Repeated members within a board are collapsed.
    pub fn from_boards<B: AsRef<[u32]>>(boards: &[B], attrs: Vec<NodeAttrs>) -> Result<BipartiteGraph> {
        let n = attrs.len();
        let mut cleaned: Vec<Vec<u32>> = Vec::with_capacity(boards.len());
        for (ci, b) in boards.iter().enumerate() {
            let mut members = b.as_ref().to_vec();
            if let Some(&bad) = members.iter().find(|&&d| d as usize >= n) {
                bail!(Integrity, "board {ci} references director {bad} of {n}");
            }
            members.sort_unstable();
            members.dedup();
            cleaned.push(members);
        }
        let refs: Vec<&[u32]> = cleaned.iter().map(Vec::as_slice).collect();
        Ok(Self::assemble(&refs, attrs))
    }

    fn assemble(boards: &[&[u32]], attrs: Vec<NodeAttrs>) -> BipartiteGraph {
        let n = attrs.len();
        let mut company_offsets = Vec::with_capacity(boards.len() + 1);
        let mut company_members = Vec::with_capacity(boards.iter().map(|b| b.len()).sum());
        company_offsets.push(0);
        let mut counts = vec![0usize; n];
        for b in boards {
            company_members.extend_from_slice(b);
            company_offsets.push(company_members.len());
            for &d in *b {
                counts[d as usize] += 1;
            }
        }
        let mut director_offsets = Vec::with_capacity(n + 1);
        director_offsets.push(0);
        for c in &counts {
            director_offsets.push(director_offsets.last().unwrap() + c);
        }
        let mut cursor = director_offsets.clone();
        let mut director_companies = vec![0u32; company_members.len()];
        for (ci, b) in boards.iter().enumerate() {
            for &d in *b {
                director_companies[cursor[d as usize]] = ci as u32;
                cursor[d as usize] += 1;
            }
        }
        BipartiteGraph {
            company_offsets,
            company_members,
            director_offsets,
            director_companies,
            director_attrs: attrs,
        }
    }

    pub fn n_directors(&self) -> usize {
        self.director_attrs.len()
    }

    pub fn n_companies(&self) -> usize {
        self.company_offsets.len() - 1
    }

    /// Number of seats.
    pub fn edge_count(&self) -> usize {
        self.company_members.len()
    }

    pub fn board(&self, company: usize) -> &[u32] {
        &self.company_members[self.company_offsets[company]..self.company_offsets[company + 1]]
    }

    pub fn companies_of(&self, director: usize) -> &[u32] {
        &self.director_companies[self.director_offsets[director]..self.director_offsets[director + 1]]
    }

    pub fn boards(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.n_companies()).map(move |c| self.board(c))
    }

    pub fn attrs(&self) -> &[NodeAttrs] {
        &self.director_attrs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Gender;

    fn attrs(n: usize) -> Vec<NodeAttrs> {
        (0..n as u32).map(|i| NodeAttrs::new(i, Gender::Missing)).collect()
    }

    #[test]
    fn one_edge_per_seat() {
        let bg = BipartiteGraph::from_boards(&[vec![0, 1, 2]], attrs(3)).unwrap();
        assert_eq!(bg.edge_count(), 3);
        let bg = BipartiteGraph::from_boards(&[vec![0, 1], vec![1, 2]], attrs(3)).unwrap();
        assert_eq!(bg.edge_count(), 4);
        assert_eq!(bg.companies_of(1), &[0, 1]);
    }

    #[test]
    fn parallel_seats_collapse_and_bad_ids_fail() {
        let bg = BipartiteGraph::from_boards(&[vec![0, 0, 1]], attrs(2)).unwrap();
        assert_eq!(bg.edge_count(), 2);
        assert!(BipartiteGraph::from_boards(&[vec![0, 5]], attrs(2)).is_err());
    }
}
