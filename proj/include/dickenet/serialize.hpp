#pragma once

// Structured-text persistence of complex vectors and matrices.
//
//   dickenet-complex 1
//   kind <dicke_state|symmetric_unitary|two_node_state>
//   N <atoms per node>
//   ordering <row-major|row-major A-major>
//   rows <r>
//   cols <c>
//   (re, im)          one entry per line, row-major, 17 significant digits
//   ...
//   end

#include "dickenet/dicke.hpp"

#include <iosfwd>
#include <string>

namespace dickenet
{

class TwoNodeState;

struct ComplexBlock
{
	std::string kind;
	int atoms = 0;
	std::string ordering = "row-major";
	ComplexMatrix data; // rows x cols
};

void write_complex_block(std::ostream& os, const ComplexBlock& block);
/// Throws std::runtime_error with the offending line number on malformed input.
ComplexBlock read_complex_block(std::istream& is);

/// "(re, im)" with 17 significant digits each.
std::string format_complex(cplx z);
/// "%.17g" formatting of a real value.
std::string format_real(double x);

void write_state(std::ostream& os, const DickeState& psi);
void write_unitary(std::ostream& os, const SymmetricUnitary& u);
void write_two_node_state(std::ostream& os, const TwoNodeState& psi);

DickeState read_state(std::istream& is);
SymmetricUnitary read_unitary(std::istream& is);
TwoNodeState read_two_node_state(std::istream& is);

} // namespace dickenet
