#ifndef UICT_BOUNDARY_CHAIN_HPP
#define UICT_BOUNDARY_CHAIN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uict/exact.hpp"
#include "uict/moves.hpp"
#include "uict/rng.hpp"

namespace uict {

/// Raised when a move sequence asks for a Minus at boundary length 1.
class IllegalMoveError : public std::invalid_argument {
public:
    IllegalMoveError(std::size_t index)
        : std::invalid_argument("illegal Minus move at boundary length 1, move index " +
                                std::to_string(index)),
          index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

/// Raised when a trajectory ends before the requested layer stops are found.
class InsufficientTrajectoryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Probability of the given move when the boundary has m edges: (m+s)/(2m).
/// The two moves always sum to one; at m = 1 the Minus move has probability 0.
inline double step_prob(std::int64_t m, Move move) {
    if (m < 1) throw std::domain_error("boundary length must be >= 1");
    return static_cast<double>(m + sign(move)) / static_cast<double>(2 * m);
}

/// Recorded boundary-length chain M_0..M_n together with the moves that
/// produced it. values[i+1] - values[i] == sign(moves[i]) and values[i] >= 1.
struct BoundaryTrajectory {
    std::int64_t m0 = 1;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> values;
    MoveSequence moves;

    std::size_t steps() const { return moves.size(); }
};

/// Times n_1 = 0 < n_2 < ... at which the growth completes a layer, with the
/// boundary length at each stop.
struct StripStops {
    std::vector<std::uint64_t> times;
    std::vector<std::int64_t> boundary_at_stop;

    std::size_t count() const { return times.size(); }
};

/// Online layer-stop detection. A layer that starts with boundary m is
/// complete at the m-th Minus move after the previous stop; the detector
/// cross-checks the equivalent hitting-time identity
///     n_{t+1} - n_t == M_{n_t} + M_{n_{t+1}}
/// on every stop and verifies max M over the layer never exceeds its span.
class StripDetector {
public:
    explicit StripDetector(std::int64_t m0) {
        if (m0 < 1) throw std::domain_error("m0 must be >= 1");
        boundary_ = m0;
        boundary_at_stop_ = m0;
    }

    /// Consumes one move. Returns the stop index t if this move completed a
    /// layer (the first stop, t = 1, is at step 0 and is implicit).
    std::optional<std::int64_t> feed(Move mv) {
        if (boundary_ == 1 && mv == Move::Minus) throw IllegalMoveError(step_);
        boundary_ += sign(mv);
        ++step_;
        if (boundary_ > max_since_stop_) max_since_stop_ = boundary_;
        if (mv == Move::Minus && ++minus_count_ == boundary_at_stop_) {
            const std::uint64_t span = step_ - last_stop_step_;
            if (span != static_cast<std::uint64_t>(boundary_ + boundary_at_stop_))
                throw std::logic_error("layer-stop identity violated");
            if (max_since_stop_ > static_cast<std::int64_t>(span))
                throw std::logic_error("layer maximum exceeds layer span");
            last_stop_step_ = step_;
            boundary_at_stop_ = boundary_;
            minus_count_ = 0;
            max_since_stop_ = boundary_;
            return ++stops_found_ + 1; // n_1 = 0 counts as the first stop
        }
        return std::nullopt;
    }

    std::int64_t boundary() const { return boundary_; }
    std::uint64_t step() const { return step_; }
    /// Number of stops seen so far, counting n_1 = 0.
    std::int64_t stop_count() const { return stops_found_ + 1; }
    std::int64_t boundary_at_last_stop() const { return boundary_at_stop_; }
    std::uint64_t last_stop_step() const { return last_stop_step_; }

private:
    std::int64_t boundary_ = 1;
    std::uint64_t step_ = 0;
    std::int64_t minus_count_ = 0;
    std::int64_t boundary_at_stop_ = 1;
    std::uint64_t last_stop_step_ = 0;
    std::int64_t max_since_stop_ = 1;
    std::int64_t stops_found_ = 0;
};

/// Draws one chain move at boundary m.
inline Move draw_move(std::int64_t m, RngStream& rng) {
    return rng.uniform() < step_prob(m, Move::Plus) ? Move::Plus : Move::Minus;
}

BoundaryTrajectory sample_trajectory(std::int64_t m0, std::uint64_t n_steps, std::uint64_t seed,
                                     std::uint64_t stream_index = 0);

/// Boundary length after n_steps moves, without storing the path.
std::int64_t run_chain_to_step(std::int64_t m0, std::uint64_t n_steps, RngStream& rng);

/// Boundary length at the stop with index target_t (n_1 = 0 is index 1).
std::int64_t run_chain_to_stop(std::int64_t m0, std::int64_t target_t, RngStream& rng);

/// Extracts the first t_max layer stops from a recorded trajectory.
/// Throws InsufficientTrajectoryError if the trajectory is too short.
StripStops strip_stops(const BoundaryTrajectory& traj, std::int64_t t_max);

/// Probability that a completed layer takes the boundary from m to m + k:
/// ((m+k)/m) C(2m+k-1, m-1) / 2^(2m+k), evaluated in the log domain.
double strip_kernel_exact(std::int64_t m, std::int64_t k);

/// Kernel row over k = -m+1, -m+2, ... truncated once the accumulated tail
/// mass drops below tail_bound; probs[i] corresponds to k = k_min + i.
struct KernelRow {
    std::int64_t k_min = 0;
    std::vector<double> probs;
    double residual = 0.0;
};
KernelRow strip_kernel_row(std::int64_t m, double tail_bound = 1e-12);

/// Exhaustive enumeration oracle for the layer kernel: walks every permitted
/// move sequence from boundary m that completes one layer within len_cap
/// moves, accumulating exact path probabilities by final offset k.
struct BruteForceKernel {
    std::map<std::int64_t, exact::Rational> mass;
    exact::Rational residual; // probability of sequences longer than len_cap
    std::int64_t len_cap = 0;
};
BruteForceKernel strip_kernel_bruteforce(std::int64_t m, std::int64_t len_cap);

/// Finite-scale generator coefficients of the rescaled chain at x = m/sqrt(n),
/// h = 1/n, derived from step_prob: drift b, squared volatility sigma2, and
/// the mass delta_eps beyond jumps of size eps > 1/sqrt(n).
struct GeneratorCoefficients {
    double x = 0.0;
    double b = 0.0;
    double sigma2 = 0.0;
    double delta_eps = 0.0;
};
GeneratorCoefficients discrete_generator_coeffs(std::int64_t m, std::int64_t n);

} // namespace uict

#endif
