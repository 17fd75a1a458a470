#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qidlab/quantum.hpp"

namespace qidlab {

/// Message-indexed (state, decoding effect) pairs over n uses of a channel.
/// The decoder holds exactly one effect per message; the rest effect
/// completing it to a POVM is implicit.
struct TransmissionCode {
    KrausChannel channel;  // single copy
    int block_n;
    std::vector<DensityOperator> codewords;  // on in_dim^n
    SubPovm decoder;                         // M effects on out_dim^n

    TransmissionCode(KrausChannel ch, int n, std::vector<DensityOperator> words, SubPovm dec);

    int messages() const { return static_cast<int>(codewords.size()); }
    KrausChannel blocked_channel() const { return channel.tensor_power(block_n); }

    json to_json() const;
    static TransmissionCode from_json(const json& j);
};

/// Tr N^(x n)(pi_m) D_m for every message.
std::vector<double> per_message_success(const TransmissionCode& code);

double max_error(const TransmissionCode& code);
double avg_error(const TransmissionCode& code);

/// Keep the ceil(M/2) messages of smallest error (ties by index). If the
/// input has average error <= eps_avg, the result has max error <= 2*eps_avg.
TransmissionCode expurgate(const TransmissionCode& code, double eps_avg);

enum class CodeKind { basis, haar };
enum class DecoderKind { pgm, projective };

CodeKind code_kind_from_string(const std::string& s);
DecoderKind decoder_kind_from_string(const std::string& s);

/// Seeded fixture generator. kind=basis uses the first M computational basis
/// states; kind=haar draws M Haar-uniform pure codewords. The decoder is the
/// pretty-good measurement of the channel outputs, or rank-1 projectors onto
/// the orthonormalized dominant output vectors.
TransmissionCode random_code(const KrausChannel& channel, int n, int M, CodeKind kind,
                             DecoderKind decoder, uint64_t seed);

}  // namespace qidlab
