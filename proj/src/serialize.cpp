#include "dickenet/serialize.hpp"

#include "dickenet/network.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dickenet
{

namespace
{

class LineReader
{
public:
	explicit LineReader(std::istream& is) : is_{is} {}

	std::string next()
	{
		std::string line;
		while(std::getline(is_, line))
		{
			++line_no_;
			if(!line.empty() && line.back() == '\r')
				line.pop_back();
			if(line.find_first_not_of(" \t") != std::string::npos)
				return line;
		}
		fail("unexpected end of input");
	}

	[[noreturn]] void fail(const std::string& what) const
	{
		throw std::runtime_error("line " + std::to_string(line_no_) + ": " + what);
	}

	/// Parses "<key> <value>" and returns the value text.
	std::string keyed(const std::string& key)
	{
		const std::string line = next();
		if(line.rfind(key + " ", 0) != 0)
			fail("expected '" + key + " ...', got '" + line + "'");
		return line.substr(key.size() + 1);
	}

	int keyed_int(const std::string& key)
	{
		const std::string v = keyed(key);
		int out = 0;
		const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
		if(ec != std::errc{} || ptr != v.data() + v.size())
			fail("'" + key + "' expects an integer, got '" + v + "'");
		return out;
	}

private:
	std::istream& is_;
	int line_no_ = 0;
};

cplx parse_entry(LineReader& in)
{
	const std::string line = in.next();
	double re = 0.0;
	double im = 0.0;
	char tail = 0;
	if(std::sscanf(line.c_str(), " ( %lf , %lf ) %c", &re, &im, &tail) != 2)
		in.fail("malformed complex entry '" + line + "'");
	return {re, im};
}

ComplexBlock expect_kind(std::istream& is, const std::string& kind)
{
	ComplexBlock b = read_complex_block(is);
	if(b.kind != kind)
		throw std::runtime_error("expected kind '" + kind + "', found '" + b.kind + "'");
	return b;
}

} // namespace

std::string format_real(double x)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

std::string format_complex(cplx z)
{
	return "(" + format_real(z.real()) + ", " + format_real(z.imag()) + ")";
}

void write_complex_block(std::ostream& os, const ComplexBlock& block)
{
	os << "dickenet-complex 1\n"
	   << "kind " << block.kind << '\n'
	   << "N " << block.atoms << '\n'
	   << "ordering " << block.ordering << '\n'
	   << "rows " << block.data.rows() << '\n'
	   << "cols " << block.data.cols() << '\n';
	for(Eigen::Index r = 0; r < block.data.rows(); ++r)
		for(Eigen::Index c = 0; c < block.data.cols(); ++c)
			os << format_complex(block.data(r, c)) << '\n';
	os << "end\n";
}

ComplexBlock read_complex_block(std::istream& is)
{
	LineReader in(is);
	if(in.next() != "dickenet-complex 1")
		in.fail("missing 'dickenet-complex 1' header");
	ComplexBlock b;
	b.kind = in.keyed("kind");
	b.atoms = in.keyed_int("N");
	b.ordering = in.keyed("ordering");
	const int rows = in.keyed_int("rows");
	const int cols = in.keyed_int("cols");
	if(b.atoms < 1 || rows < 1 || cols < 1)
		in.fail("N, rows and cols must be positive");
	b.data.resize(rows, cols);
	for(int r = 0; r < rows; ++r)
		for(int c = 0; c < cols; ++c)
			b.data(r, c) = parse_entry(in);
	if(in.next() != "end")
		in.fail("expected 'end'");
	return b;
}

void write_state(std::ostream& os, const DickeState& psi)
{
	write_complex_block(os, {"dicke_state", psi.dims().atoms(), "row-major", psi.amplitudes()});
}

void write_unitary(std::ostream& os, const SymmetricUnitary& u)
{
	write_complex_block(os, {"symmetric_unitary", u.dims().atoms(), "row-major", u.matrix()});
}

void write_two_node_state(std::ostream& os, const TwoNodeState& psi)
{
	const int d = psi.dim();
	ComplexMatrix flat = psi.flattened();
	flat.resize(d * d, 1);
	write_complex_block(os, {"two_node_state", psi.dims().atoms(), "row-major A-major", flat});
}

DickeState read_state(std::istream& is)
{
	ComplexBlock b = expect_kind(is, "dicke_state");
	if(b.data.cols() != 1 || b.data.rows() != b.atoms + 1)
		throw std::runtime_error("dicke_state must be a column of length N+1");
	return DickeState(ComplexVector(b.data.col(0)));
}

SymmetricUnitary read_unitary(std::istream& is)
{
	ComplexBlock b = expect_kind(is, "symmetric_unitary");
	if(b.data.rows() != b.atoms + 1 || b.data.cols() != b.atoms + 1)
		throw std::runtime_error("symmetric_unitary must be (N+1)x(N+1)");
	return SymmetricUnitary(std::move(b.data));
}

TwoNodeState read_two_node_state(std::istream& is)
{
	ComplexBlock b = expect_kind(is, "two_node_state");
	const int d = b.atoms + 1;
	if(b.data.cols() != 1 || b.data.rows() != d * d)
		throw std::runtime_error("two_node_state must be a column of length (N+1)^2");
	if(b.ordering != "row-major A-major")
		throw std::runtime_error("two_node_state ordering must be 'row-major A-major'");
	ComplexMatrix m(d, d);
	for(int a = 0; a < d; ++a)
		for(int c = 0; c < d; ++c)
			m(a, c) = b.data(a * d + c, 0);
	return TwoNodeState(std::move(m));
}

} // namespace dickenet
