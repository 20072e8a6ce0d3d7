// Copyright 2026 The sparsesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sparsesim {

/// Error raised for malformed or out-of-range caller input.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

using Amplitude = std::complex<double>;

/// Widest register representable by a single BitString.
inline constexpr int kMaxQubits = 63;

inline constexpr std::uint64_t low_mask(int bits) {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

/// A fixed-length bit string x_1 ... x_n.
///
/// Bit i (zero based) is qubit i. The integer view is x_1 2^0 + x_2 2^1 + ... + x_n 2^(n-1),
/// so the first bit is the least significant one. Text form lists qubit 0 first.
class BitString {
   public:
    BitString() = default;

    BitString(int size, std::uint64_t value) : bits_(value), size_(size) {
        if (size < 0 || size > kMaxQubits) {
            throw InputError("BitString: length " + std::to_string(size) + " outside [0, 63]");
        }
        if ((value & ~low_mask(size)) != 0) {
            throw InputError("BitString: value does not fit in " + std::to_string(size) + " bits");
        }
    }

    static BitString zeros(int size) { return BitString(size, 0); }

    /// Parses "0110" where the first character is qubit 0.
    static BitString parse(std::string_view text) {
        if (text.size() > static_cast<std::size_t>(kMaxQubits)) {
            throw InputError("BitString: string longer than 63 bits");
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '1') {
                v |= std::uint64_t{1} << i;
            } else if (text[i] != '0') {
                throw InputError("BitString: invalid character '" + std::string(1, text[i]) + "' at position " +
                                 std::to_string(i));
            }
        }
        return BitString(static_cast<int>(text.size()), v);
    }

    static BitString from_bits(std::span<const int> bits) {
        if (bits.size() > static_cast<std::size_t>(kMaxQubits)) {
            throw InputError("BitString: more than 63 bits");
        }
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != 0 && bits[i] != 1) {
                throw InputError("BitString: bit values must be 0 or 1");
            }
            v |= static_cast<std::uint64_t>(bits[i]) << i;
        }
        return BitString(static_cast<int>(bits.size()), v);
    }

    int size() const { return size_; }
    std::uint64_t value() const { return bits_; }
    bool operator[](int i) const { return ((bits_ >> i) & 1) != 0; }

    std::vector<int> bits() const {
        std::vector<int> out(static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i) {
            out[static_cast<std::size_t>(i)] = (*this)[i] ? 1 : 0;
        }
        return out;
    }

    std::string str() const {
        std::string s(static_cast<std::size_t>(size_), '0');
        for (int i = 0; i < size_; ++i) {
            if ((*this)[i]) {
                s[static_cast<std::size_t>(i)] = '1';
            }
        }
        return s;
    }

    /// The first m bits.
    BitString prefix(int m) const {
        if (m < 0 || m > size_) {
            throw InputError("BitString::prefix: length out of range");
        }
        return BitString(m, bits_ & low_mask(m));
    }

    /// This string followed by `bit` as the new last (most significant) position.
    BitString extended(int bit) const { return concat(BitString(1, static_cast<std::uint64_t>(bit & 1))); }

    /// this ++ tail: tail occupies positions size() .. size()+tail.size()-1.
    BitString concat(const BitString& tail) const {
        return BitString(size_ + tail.size_, bits_ | (tail.bits_ << size_));
    }

    int popcount() const { return std::popcount(bits_); }

    friend bool operator==(const BitString&, const BitString&) = default;
    friend auto operator<=>(const BitString& a, const BitString& b) {
        if (auto c = a.size_ <=> b.size_; c != 0) {
            return c;
        }
        return a.bits_ <=> b.bits_;
    }

   private:
    std::uint64_t bits_ = 0;
    int size_ = 0;
};

/// Collects the bits of `x` at `positions` into a compact word; positions[0] becomes bit 0.
inline std::uint64_t gather_bits(std::uint64_t x, std::span<const int> positions) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out |= ((x >> positions[i]) & 1) << i;
    }
    return out;
}

/// Inverse of gather_bits: writes bit i of `compact` to position positions[i] of `x`.
inline std::uint64_t scatter_bits(std::uint64_t x, std::uint64_t compact, std::span<const int> positions) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << positions[i];
        x = ((compact >> i) & 1) ? (x | bit) : (x & ~bit);
    }
    return x;
}

/// A fixed gather/scatter pattern, stored as runs of consecutive positions so that inner loops
/// move whole bit fields at a time. Equivalent to gather_bits / scatter_bits on `positions`.
class BitLayout {
   public:
    BitLayout() = default;
    explicit BitLayout(std::vector<int> positions) : positions_(std::move(positions)) {
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            if (!runs_.empty() && runs_.back().position + runs_.back().length == positions_[i]) {
                ++runs_.back().length;
                runs_.back().mask = low_mask(runs_.back().length);
            } else {
                runs_.push_back({static_cast<int>(i), positions_[i], 1, 1});
            }
        }
    }

    const std::vector<int>& positions() const { return positions_; }
    int size() const { return static_cast<int>(positions_.size()); }

    std::uint64_t gather(std::uint64_t x) const {
        std::uint64_t out = 0;
        for (const Run& r : runs_) {
            out |= ((x >> r.position) & r.mask) << r.offset;
        }
        return out;
    }

    std::uint64_t scatter(std::uint64_t x, std::uint64_t compact) const {
        for (const Run& r : runs_) {
            x = (x & ~(r.mask << r.position)) | (((compact >> r.offset) & r.mask) << r.position);
        }
        return x;
    }

   private:
    struct Run {
        int offset;
        int position;
        int length;
        std::uint64_t mask;
    };
    std::vector<int> positions_;
    std::vector<Run> runs_;
};

/// Validates that `positions` are distinct qubits in [0, n).
inline void check_subset(std::span<const int> positions, int n, std::string_view what) {
    std::uint64_t seen = 0;
    for (int q : positions) {
        if (q < 0 || q >= n) {
            throw InputError(std::string(what) + ": qubit " + std::to_string(q) + " out of range for n = " +
                             std::to_string(n));
        }
        if ((seen >> q) & 1) {
            throw InputError(std::string(what) + ": qubit " + std::to_string(q) + " listed twice");
        }
        seen |= std::uint64_t{1} << q;
    }
}

}  // namespace sparsesim
