//! Baseband link-level simulation of OFDM with generalized index modulation.
//!
//! The transmit chain is bit stuffing ([`mapping`]) or convolutional on/off
//! encoding ([`codec`]), constellation mapping, OFDM modulation ([`ofdm`]),
//! and a block-fading channel ([`channel`]). The receiver equalizes, detects
//! ([`detection`]) and decodes. [`analysis`] holds the closed-form error
//! rates, and [`sim`] runs seeded Monte Carlo sweeps against them.

pub mod analysis;
pub mod channel;
pub mod codec;
pub mod detection;
pub mod mapping;
pub mod ofdm;
pub mod sim;
