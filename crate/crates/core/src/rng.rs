//! Counter-based random streams.
//!
//! A stream is identified by `(seed, stream_id)`. Every output is a pure
//! function of that pair and a 64-bit position, so a stream can be advanced
//! sequentially or addressed directly by a key (a lattice coordinate, a tree
//! node, a sequence index). Keyed access is what lets several passage-time
//! computations share one weight environment without storing it.

use rand_core::RngCore;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const STREAM_MULT: u64 = 0xd1b5_4a32_d192_ed03;

/// Domain used by sequential draws; keyed draws must use other domains.
const SEQUENTIAL: u64 = 0;

#[inline]
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a list of signed coordinates and a tag into a single 64-bit key.
#[inline]
pub fn coord_key(tag: u64, coords: &[i64]) -> u64 {
    let mut h = mix64(tag.wrapping_add(GOLDEN));
    for &c in coords {
        h = mix64(h ^ (c as u64)).wrapping_add(GOLDEN);
    }
    h
}

/// Maps 64 random bits to a uniform in the open interval (0, 1).
#[inline]
pub fn bits_to_open01(x: u64) -> f64 {
    ((x >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Seeded, splittable, deterministic random stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
    key: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let key = mix64(mix64(seed ^ GOLDEN) ^ stream_id.wrapping_mul(STREAM_MULT));
        RngStream {
            seed,
            stream_id,
            counter: 0,
            key,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Independent child stream, e.g. one per role inside a replica.
    pub fn substream(&self, id: u64) -> RngStream {
        RngStream::new(self.key, id)
    }

    /// Random bits addressed by `(domain, index)`; does not advance the stream.
    #[inline]
    pub fn keyed_u64(&self, domain: u64, index: u64) -> u64 {
        let d = mix64(self.key ^ mix64(domain.wrapping_add(1).wrapping_mul(GOLDEN)));
        mix64(mix64(d.wrapping_add(index.wrapping_mul(GOLDEN))) ^ self.key.rotate_left(17))
    }

    /// Keyed uniform in (0, 1).
    #[inline]
    pub fn keyed_open01(&self, domain: u64, index: u64) -> f64 {
        bits_to_open01(self.keyed_u64(domain.wrapping_add(1), index))
    }

    /// Precomputed handle for repeated keyed draws in one domain; yields the
    /// same values as [`RngStream::keyed_open01`].
    pub fn domain(&self, domain: u64) -> KeyedDomain {
        let domain = domain.wrapping_add(1);
        KeyedDomain {
            base: mix64(self.key ^ mix64(domain.wrapping_add(1).wrapping_mul(GOLDEN))),
            rot: self.key.rotate_left(17),
        }
    }

    #[inline]
    pub fn next_bits(&mut self) -> u64 {
        let out = self.keyed_u64(SEQUENTIAL, self.counter);
        self.counter = self.counter.wrapping_add(1);
        out
    }

    /// Sequential uniform in (0, 1).
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        bits_to_open01(self.next_bits())
    }
}

/// Keyed draws in a fixed domain of one stream.
#[derive(Clone, Copy, Debug)]
pub struct KeyedDomain {
    base: u64,
    rot: u64,
}

impl KeyedDomain {
    #[inline]
    pub fn bits(&self, index: u64) -> u64 {
        mix64(mix64(self.base.wrapping_add(index.wrapping_mul(GOLDEN))) ^ self.rot)
    }

    #[inline]
    pub fn open01(&self, index: u64) -> f64 {
        bits_to_open01(self.bits(index))
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        (self.next_bits() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.next_bits()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_bits().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
