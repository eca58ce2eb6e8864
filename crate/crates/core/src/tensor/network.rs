//! A small tensor network evaluated eagerly, block by block.
//!
//! Compiled maps never materialise their full domain: inputs enter as separate
//! blocks and legs are contracted as the derivation dictates, so a sentence
//! whose joint input space has hundreds of millions of coordinates still
//! evaluates from a handful of small tensors.

use super::value::{kron, matmul, permute_axes};
use super::SemanticsError;

pub type LegId = usize;

#[derive(Clone, Debug)]
struct Block {
    legs: Vec<(LegId, usize)>,
    data: Vec<f64>,
}

impl Block {
    fn dims(&self) -> Vec<usize> {
        self.legs.iter().map(|l| l.1).collect()
    }

    fn pos(&self, leg: LegId) -> usize {
        self.legs.iter().position(|l| l.0 == leg).expect("leg in block")
    }

    /// Moves the axes listed in `front` to the front (in that order).
    fn move_front(&mut self, front: &[usize]) {
        let mut perm: Vec<usize> = front.to_vec();
        perm.extend((0..self.legs.len()).filter(|p| !front.contains(p)));
        self.apply_perm(&perm);
    }

    fn move_back(&mut self, back: &[usize]) {
        let mut perm: Vec<usize> = (0..self.legs.len()).filter(|p| !back.contains(p)).collect();
        perm.extend_from_slice(back);
        self.apply_perm(&perm);
    }

    fn apply_perm(&mut self, perm: &[usize]) {
        self.data = permute_axes(&self.data, &self.dims(), perm);
        self.legs = perm.iter().map(|&p| self.legs[p]).collect();
    }
}

#[derive(Debug, Default)]
pub struct Network {
    blocks: Vec<Block>,
    next: LegId,
}

impl Network {
    pub fn new() -> Self {
        Network::default()
    }

    fn fresh(&mut self) -> LegId {
        self.next += 1;
        self.next
    }

    fn find(&self, leg: LegId) -> Result<usize, SemanticsError> {
        self.blocks
            .iter()
            .position(|b| b.legs.iter().any(|l| l.0 == leg))
            .ok_or(SemanticsError::Network(format!("unknown leg {leg}")))
    }

    pub fn dim(&self, leg: LegId) -> Result<usize, SemanticsError> {
        let b = &self.blocks[self.find(leg)?];
        Ok(b.legs[b.pos(leg)].1)
    }

    /// Adds a dense tensor with one fresh leg per axis.
    pub fn input(&mut self, data: Vec<f64>, dims: &[usize]) -> Vec<LegId> {
        debug_assert_eq!(data.len(), dims.iter().product::<usize>());
        let legs: Vec<(LegId, usize)> = dims.iter().map(|&d| (self.fresh(), d)).collect();
        let ids = legs.iter().map(|l| l.0).collect();
        self.blocks.push(Block { legs, data });
        ids
    }

    /// The identity on a `d`-dimensional space as a two-legged block.
    pub fn identity(&mut self, d: usize) -> (LegId, LegId) {
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            data[i * d + i] = 1.0;
        }
        let legs = self.input(data, &[d, d]);
        (legs[0], legs[1])
    }

    /// Reads one leg as several, row-major.
    pub fn split(&mut self, leg: LegId, dims: &[usize]) -> Result<Vec<LegId>, SemanticsError> {
        let bi = self.find(leg)?;
        let at = self.blocks[bi].pos(leg);
        let d = self.blocks[bi].legs[at].1;
        if dims.iter().product::<usize>() != d {
            return Err(SemanticsError::Network(format!("cannot split {d} into {dims:?}")));
        }
        let new: Vec<(LegId, usize)> = dims.iter().map(|&d| (self.fresh(), d)).collect();
        let ids = new.iter().map(|l| l.0).collect();
        self.blocks[bi].legs.splice(at..=at, new);
        Ok(ids)
    }

    /// Restricts a leg to the coordinates `offset..offset+len`.
    pub fn slice(&mut self, leg: LegId, offset: usize, len: usize) -> Result<LegId, SemanticsError> {
        let bi = self.find(leg)?;
        let block = &mut self.blocks[bi];
        let at = block.pos(leg);
        let d = block.legs[at].1;
        if offset + len > d {
            return Err(SemanticsError::Network(format!("slice {offset}+{len} exceeds {d}")));
        }
        block.move_front(&[at]);
        let rest = block.data.len() / d;
        block.data = block.data[offset * rest..(offset + len) * rest].to_vec();
        let id = self.fresh();
        let block = &mut self.blocks[bi];
        block.legs[0] = (id, len);
        Ok(id)
    }

    fn merge(&mut self, i: usize, j: usize) -> usize {
        if i == j {
            return i;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let b = self.blocks.remove(hi);
        let a = &mut self.blocks[lo];
        a.data = kron(&a.data, &b.data);
        a.legs.extend(b.legs);
        lo
    }

    /// Sums over a pair of equal-dimension legs.
    pub fn contract(&mut self, x: LegId, y: LegId) -> Result<(), SemanticsError> {
        let (dx, dy) = (self.dim(x)?, self.dim(y)?);
        if dx != dy {
            return Err(SemanticsError::Network(format!("contracting legs of dims {dx} and {dy}")));
        }
        let bx = self.find(x)?;
        let by = self.find(y)?;
        if bx == by {
            let block = &mut self.blocks[bx];
            let (px, py) = (block.pos(x), block.pos(y));
            block.move_back(&[px, py]);
            let rest = block.data.len() / (dx * dx);
            let mut out = vec![0.0; rest];
            for (r, o) in out.iter_mut().enumerate() {
                let base = r * dx * dx;
                *o = (0..dx).map(|i| block.data[base + i * dx + i]).sum();
            }
            block.data = out;
            block.legs.truncate(block.legs.len() - 2);
            return Ok(());
        }
        let mut a = self.blocks[bx].clone();
        let mut b = self.blocks[by].clone();
        a.move_back(&[a.pos(x)]);
        b.move_front(&[b.pos(y)]);
        let m = a.data.len() / dx;
        let n = b.data.len() / dx;
        let data = matmul(&a.data, &b.data, m, dx, n);
        let mut legs = a.legs[..a.legs.len() - 1].to_vec();
        legs.extend_from_slice(&b.legs[1..]);
        let (lo, hi) = (bx.min(by), bx.max(by));
        self.blocks.remove(hi);
        self.blocks[lo] = Block { legs, data };
        Ok(())
    }

    /// Joins several legs (in order, row-major) into one.
    pub fn fuse(&mut self, legs: &[LegId]) -> Result<LegId, SemanticsError> {
        if legs.is_empty() {
            return Ok(self.input(vec![1.0], &[1])[0]);
        }
        let mut bi = self.find(legs[0])?;
        for &l in &legs[1..] {
            let bj = self.find(l)?;
            bi = self.merge(bi, bj);
        }
        let block = &mut self.blocks[bi];
        let pos: Vec<usize> = legs.iter().map(|&l| block.pos(l)).collect();
        let d: usize = pos.iter().map(|&p| block.legs[p].1).product();
        block.move_back(&pos);
        block.legs.truncate(block.legs.len() - legs.len());
        let id = self.fresh();
        self.blocks[bi].legs.push((id, d));
        Ok(id)
    }

    /// Applies a dense `d_in × d_out` matrix to a leg.
    pub fn matrix(&mut self, leg: LegId, data: Vec<f64>, d_in: usize, d_out: usize) -> Result<LegId, SemanticsError> {
        let legs = self.input(data, &[d_in, d_out]);
        self.contract(leg, legs[0])?;
        Ok(legs[1])
    }

    /// Collapses the network to a dense tensor over `out`, in that order.
    pub fn finish(mut self, out: &[LegId]) -> Result<Vec<f64>, SemanticsError> {
        while self.blocks.len() > 1 {
            let last = self.blocks.len() - 1;
            self.merge(last - 1, last);
        }
        let Some(mut block) = self.blocks.pop() else {
            return Ok(vec![1.0]);
        };
        if block.legs.len() != out.len() {
            return Err(SemanticsError::Network(format!(
                "{} open legs, expected {}",
                block.legs.len(),
                out.len()
            )));
        }
        let pos: Vec<usize> = out.iter().map(|&l| block.pos(l)).collect();
        block.move_front(&pos);
        Ok(block.data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_vector_product() {
        let mut net = Network::new();
        let v = net.input(vec![1.0, 2.0], &[2])[0];
        // m[a][b], contracted on a
        let m = net.input(vec![1.0, 2.0, 3.0, 4.0], &[2, 2]);
        net.contract(v, m[0]).unwrap();
        assert_eq!(net.finish(&[m[1]]).unwrap(), vec![7.0, 10.0]);
    }

    #[test]
    fn trace_and_fuse() {
        let mut net = Network::new();
        let m = net.input(vec![1.0, 2.0, 3.0, 4.0], &[2, 2]);
        net.contract(m[0], m[1]).unwrap();
        assert_eq!(net.finish(&[]).unwrap(), vec![5.0]);

        let mut net = Network::new();
        let a = net.input(vec![1.0, 2.0], &[2])[0];
        let b = net.input(vec![3.0, 5.0], &[2])[0];
        let ba = net.fuse(&[b, a]).unwrap();
        assert_eq!(net.finish(&[ba]).unwrap(), vec![3.0, 6.0, 5.0, 10.0]);
    }

    #[test]
    fn split_and_slice() {
        let mut net = Network::new();
        let x = net.input((0..7).map(f64::from).collect(), &[7])[0];
        let layer = net.slice(x, 3, 4).unwrap();
        let parts = net.split(layer, &[2, 2]).unwrap();
        let swapped = net.fuse(&[parts[1], parts[0]]).unwrap();
        assert_eq!(net.finish(&[swapped]).unwrap(), vec![3.0, 5.0, 4.0, 6.0]);
    }

    #[test]
    fn fuse_of_unequal_legs_in_one_block() {
        let mut net = Network::new();
        let t = net.input((0..6).map(f64::from).collect(), &[2, 3]);
        let u = net.input(vec![1.0; 4], &[4])[0];
        let f = net.fuse(&[t[1], u]).unwrap();
        assert_eq!(net.dim(f).unwrap(), 12);
        let all = net.fuse(&[t[0], f]).unwrap();
        assert_eq!(net.dim(all).unwrap(), 24);
    }
}
