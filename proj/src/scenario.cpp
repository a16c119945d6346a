#include "dickenet/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace dickenet
{

namespace
{

std::string trim(std::string s)
{
	const auto b = s.find_first_not_of(" \t");
	if(b == std::string::npos)
		return {};
	const auto e = s.find_last_not_of(" \t");
	return s.substr(b, e - b + 1);
}

/// Products and quotients of numbers and `pi`, with an optional leading sign:
/// "pi/50", "-2*pi/3", "2*pi*0.5e15", "1e-9".
std::optional<double> evaluate_expression(const std::string& text)
{
	std::string s = trim(text);
	if(s.empty())
		return std::nullopt;
	double sign = 1.0;
	if(s[0] == '-' || s[0] == '+')
	{
		sign = s[0] == '-' ? -1.0 : 1.0;
		s = trim(s.substr(1));
	}
	double value = 1.0;
	char op = '*';
	std::size_t pos = 0;
	while(true)
	{
		std::size_t end = pos;
		// a factor ends at the next operator that is not an exponent sign
		while(end < s.size() && s[end] != '*' && s[end] != '/')
			++end;
		const std::string tok = trim(s.substr(pos, end - pos));
		double f = 0.0;
		if(tok == "pi")
			f = std::numbers::pi;
		else
		{
			if(tok.empty())
				return std::nullopt;
			char* stop = nullptr;
			f = std::strtod(tok.c_str(), &stop);
			if(stop != tok.c_str() + tok.size())
				return std::nullopt;
		}
		value = op == '*' ? value * f : value / f;
		if(end >= s.size())
			break;
		op = s[end];
		pos = end + 1;
	}
	value *= sign;
	if(!std::isfinite(value))
		return std::nullopt;
	return value;
}

std::string where(const YAML::Node& node)
{
	const YAML::Mark m = node.Mark();
	if(m.line < 0)
		return "";
	return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what)
{
	throw ConfigError(where(node) + what);
}

class Section
{
public:
	Section(YAML::Node node, std::string path) : node_{std::move(node)}, path_{std::move(path)}
	{
		if(!node_.IsMap())
			fail(node_, "'" + path_ + "' must be a mapping");
	}

	/// Rejects keys outside `allowed`.
	void only(const std::set<std::string>& allowed) const
	{
		for(const auto& kv : node_)
		{
			const auto key = kv.first.as<std::string>();
			if(!allowed.contains(key))
				fail(kv.first, "unknown key '" + key + "' in '" + path_ + "'");
		}
	}

	[[nodiscard]] bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

	[[nodiscard]] YAML::Node get(const std::string& key) const
	{
		YAML::Node n = node_[key];
		if(!n)
			fail(node_, "missing key '" + key + "' in '" + path_ + "'");
		return n;
	}

	[[nodiscard]] std::string text(const std::string& key) const
	{
		const YAML::Node n = get(key);
		if(!n.IsScalar())
			fail(n, "'" + key + "' must be a scalar");
		return n.Scalar();
	}

	[[nodiscard]] double number(const std::string& key) const
	{
		const YAML::Node n = get(key);
		if(!n.IsScalar())
			fail(n, "'" + key + "' must be a number");
		const auto v = evaluate_expression(n.Scalar());
		if(!v)
			fail(n, "'" + key + "' is not a number: '" + n.Scalar() + "'");
		return *v;
	}

	[[nodiscard]] double number_or(const std::string& key, double fallback) const
	{
		return has(key) ? number(key) : fallback;
	}

	[[nodiscard]] long long integer(const std::string& key) const
	{
		const YAML::Node n = get(key);
		if(!n.IsScalar())
			fail(n, "'" + key + "' must be an integer");
		const std::string s = trim(n.Scalar());
		char* stop = nullptr;
		const long long v = std::strtoll(s.c_str(), &stop, 10);
		if(s.empty() || stop != s.c_str() + s.size())
			fail(n, "'" + key + "' must be an integer, got '" + s + "'");
		return v;
	}

	[[nodiscard]] int integer_in(const std::string& key, long long lo, long long hi) const
	{
		const long long v = integer(key);
		if(v < lo || v > hi)
			fail(get(key), "'" + key + "' = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
			                   std::to_string(hi) + "]");
		return static_cast<int>(v);
	}

	[[nodiscard]] Section sub(const std::string& key) const { return {get(key), path_ + "." + key}; }
	[[nodiscard]] const YAML::Node& node() const { return node_; }

private:
	YAML::Node node_;
	std::string path_;
};

constexpr long long big = 1'000'000'000;

TargetSpec parse_target(const Section& s)
{
	TargetSpec t;
	const std::string kind = s.text("target");
	if(kind == "eigenstate")
	{
		s.only({"target", "M", "p", "lambda", "optimizer"});
		t.kind = TargetSpec::Kind::eigenstate;
		t.m1 = s.integer_in("M", 1, big);
	}
	else if(kind == "clock")
	{
		s.only({"target", "M1", "M2", "p", "lambda", "optimizer"});
		t.kind = TargetSpec::Kind::clock;
		t.m1 = s.integer_in("M1", 1, big);
		t.m2 = s.integer_in("M2", 1, big);
		if(t.m2 <= t.m1)
			fail(s.get("M2"), "clock needs M1 < M2");
	}
	else if(kind == "coherent")
	{
		s.only({"target", "p", "lambda", "optimizer"});
		t.kind = TargetSpec::Kind::coherent;
	}
	else
		fail(s.get("target"), "unknown target '" + kind + "' (eigenstate, clock, coherent)");
	return t;
}

StateSpec parse_state(const Section& s, int atoms)
{
	s.only({"variational", "exact", "profile"});
	if(s.node().size() != 1)
		fail(s.node(), "'state' needs exactly one of variational, exact, profile");

	if(s.has("variational"))
	{
		const Section v = s.sub("variational");
		VariationalSpec spec;
		spec.target = parse_target(v);
		if(spec.target.m1 > atoms || (spec.target.kind == TargetSpec::Kind::clock && spec.target.m2 > atoms))
			fail(v.get("target"), "target excitation exceeds N");
		spec.p = v.integer_in("p", 1, 64);
		spec.lambda = v.number_or("lambda", 1.0);
		if(!(spec.lambda > 0.0))
			fail(v.get("lambda"), "lambda must be > 0");
		if(v.has("optimizer"))
		{
			const Section o = v.sub("optimizer");
			o.only({"restarts", "max_evals", "tolerance", "hops", "hop_step"});
			if(o.has("restarts"))
				spec.optimizer.restarts = o.integer_in("restarts", 1, 100000);
			if(o.has("max_evals"))
				spec.optimizer.max_evals = o.integer_in("max_evals", 10, big);
			spec.optimizer.tolerance = o.number_or("tolerance", spec.optimizer.tolerance);
			if(!(spec.optimizer.tolerance > 0.0))
				fail(o.get("tolerance"), "tolerance must be > 0");
			if(o.has("hops"))
				spec.optimizer.hops = o.integer_in("hops", 0, 100000);
			spec.optimizer.hop_step = o.number_or("hop_step", spec.optimizer.hop_step);
			if(!(spec.optimizer.hop_step > 0.0))
				fail(o.get("hop_step"), "hop_step must be > 0");
		}
		return spec;
	}

	if(s.has("exact"))
	{
		const Section e = s.sub("exact");
		ExactSpec spec;
		const std::string kind = e.text("kind");
		if(kind == "noon_minus_one")
		{
			e.only({"kind"});
			spec.kind = ExactSpec::Kind::noon_minus_one;
		}
		else if(kind == "psi_alpha")
		{
			e.only({"kind", "alpha", "k"});
			spec.kind = ExactSpec::Kind::psi_alpha;
			if(!evaluate_expression(e.text("alpha")))
				fail(e.get("alpha"), "alpha is not a number: '" + e.text("alpha") + "'");
			spec.alpha = Angle::parse(e.text("alpha"));
			if(std::abs(std::cos(spec.alpha.value)) < 1e-12)
				fail(e.get("alpha"), "cos(alpha) = 0 is not allowed");
			if(e.has("k"))
				spec.k = e.integer_in("k", 0, 1000);
		}
		else if(kind == "sequential")
		{
			spec.kind = ExactSpec::Kind::sequential;
			const std::string target = e.text("target");
			if(target == "eigenstate")
			{
				e.only({"kind", "target", "l"});
				spec.sequential = sequential::Eigenstate{e.integer_in("l", 1, atoms)};
			}
			else if(target == "clock")
			{
				e.only({"kind", "target", "lo", "hi"});
				const int lo = e.integer_in("lo", 1, atoms);
				const int hi = e.integer_in("hi", 1, atoms);
				if(hi <= lo)
					fail(e.get("hi"), "clock needs lo < hi");
				spec.sequential = sequential::Clock{lo, hi};
			}
			else if(target == "profile")
			{
				e.only({"kind", "target", "first", "thetas"});
				sequential::Profile p;
				p.first = e.integer_in("first", 1, atoms);
				const YAML::Node th = e.get("thetas");
				if(!th.IsSequence())
					fail(th, "'thetas' must be a list");
				for(const auto& x : th)
				{
					const auto v = evaluate_expression(x.Scalar());
					if(!x.IsScalar() || !v)
						fail(x, "theta is not a number");
					p.thetas.push_back(*v);
				}
				if(p.first + static_cast<int>(p.thetas.size()) > atoms)
					fail(th, "profile reaches beyond N excitations");
				spec.sequential = std::move(p);
			}
			else
				fail(e.get("target"), "unknown sequential target '" + target + "' (eigenstate, clock, profile)");
		}
		else
			fail(e.get("kind"), "unknown exact state '" + kind + "' (noon_minus_one, psi_alpha, sequential)");
		return spec;
	}

	const YAML::Node w = s.get("profile");
	if(!w.IsSequence() || w.size() == 0)
		fail(w, "'profile' must be a non-empty list of weights for l = 1..N");
	if(static_cast<int>(w.size()) > atoms)
		fail(w, "'profile' lists more than N weights");
	ProfileSpec spec;
	double total = 0.0;
	for(const auto& x : w)
	{
		const auto v = x.IsScalar() ? evaluate_expression(x.Scalar()) : std::nullopt;
		if(!v || *v < 0.0)
			fail(x, "profile weights must be non-negative numbers");
		spec.weights.push_back(*v);
		total += *v;
	}
	if(!(total > 0.0))
		fail(w, "profile weights sum to zero");
	return spec;
}

GravityContext parse_gravity(const Section& s)
{
	s.only({"omega_eg", "g", "delta_z", "potentials", "c", "hbar", "reference_node"});
	GravityContext ctx;
	ctx.omega_eg = s.number("omega_eg");
	if(!(ctx.omega_eg > 0.0))
		fail(s.get("omega_eg"), "omega_eg must be > 0");
	ctx.g = s.number_or("g", ctx.g);
	ctx.delta_z = s.number_or("delta_z", ctx.delta_z);
	ctx.c = s.number_or("c", ctx.c);
	if(!(ctx.c > 0.0))
		fail(s.get("c"), "c must be > 0");
	ctx.hbar = s.number_or("hbar", ctx.hbar);
	if(!(ctx.hbar > 0.0))
		fail(s.get("hbar"), "hbar must be > 0");
	if(s.has("potentials"))
	{
		const YAML::Node p = s.get("potentials");
		if(!p.IsSequence() || p.size() != 2)
			fail(p, "'potentials' must be [phi_A, phi_B]");
		const auto a = evaluate_expression(p[0].Scalar());
		const auto b = evaluate_expression(p[1].Scalar());
		if(!a || !b)
			fail(p, "potentials must be numbers");
		ctx.potentials = std::make_pair(*a, *b);
	}
	if(s.has("reference_node"))
	{
		const std::string r = s.text("reference_node");
		if(r == "A")
			ctx.reference = ReferenceNode::A;
		else if(r == "B")
			ctx.reference = ReferenceNode::B;
		else if(r == "midpoint")
			ctx.reference = ReferenceNode::midpoint;
		else
			fail(s.get("reference_node"), "reference_node must be A, B or midpoint");
	}
	return ctx;
}

const char* reference_name(ReferenceNode r)
{
	switch(r)
	{
	case ReferenceNode::A:
		return "A";
	case ReferenceNode::B:
		return "B";
	case ReferenceNode::midpoint:
		return "midpoint";
	}
	return "A";
}

} // namespace

Angle Angle::parse(const std::string& text)
{
	const auto v = evaluate_expression(text);
	if(!v)
		throw ConfigError("not an angle: '" + text + "'");
	return {*v, trim(text)};
}

Angle Angle::of(double value)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", value);
	return {value, buf};
}

DickeState TargetSpec::build(const EnsembleDims& dims) const
{
	switch(kind)
	{
	case Kind::eigenstate:
		return mass_eigenstate(dims, m1);
	case Kind::clock:
		return clock_state(dims, m1, m2);
	case Kind::coherent:
		return coherent_target(dims);
	}
	throw std::logic_error("unknown target kind");
}

std::string TargetSpec::label() const
{
	switch(kind)
	{
	case Kind::eigenstate:
		return "eigenstate " + std::to_string(m1);
	case Kind::clock:
		return "clock " + std::to_string(m1) + " " + std::to_string(m2);
	case Kind::coherent:
		return "coherent";
	}
	return {};
}

std::string to_string(SchemeKind kind)
{
	switch(kind)
	{
	case SchemeKind::nonlocal_parity:
		return "nonlocal_parity";
	case SchemeKind::local_quadrature:
		return "local_quadrature";
	case SchemeKind::position_observable:
		return "position_observable";
	}
	return {};
}

std::string to_string(EvalPath path)
{
	switch(path)
	{
	case EvalPath::analytic:
		return "analytic";
	case EvalPath::oracle:
		return "oracle";
	case EvalPath::both:
		return "both";
	}
	return {};
}

void ScenarioConfig::validate() const
{
	if(atoms < 1)
		throw ConfigError("N must be >= 1");
	if(time.steps < 2)
		throw ConfigError("time.steps must be >= 2");
	if(!(time.stop > time.start) || time.start < 0.0)
		throw ConfigError("time grid needs 0 <= start < stop");
	try
	{
		gravity.validate();
		seed.validate();
	}
	catch(const std::domain_error& e)
	{
		throw ConfigError(e.what());
	}
	if(const auto* v = std::get_if<VariationalSpec>(&state); v && v->p < 1)
		throw ConfigError("variational p must be >= 1");
	if(const auto* e = std::get_if<ExactSpec>(&state);
	   e && e->kind != ExactSpec::Kind::sequential && atoms % 2 != 0)
		throw ConfigError("exact double-twisting states need even N");
	if(aci)
	{
		if(aci->l_down < 1 || aci->l_up < aci->l_down)
			throw ConfigError("aci needs 1 <= l_down <= l_up");
		if(!(aci->window > 0.0))
			throw ConfigError("aci.window must be > 0");
	}
	if(n_max != 0 && n_max < atoms + 1)
		throw ConfigError("n_max must be 0 (default) or >= N + 1");
}

ScenarioConfig parse_scenario(const std::string& yaml_text)
{
	YAML::Node root;
	try
	{
		root = YAML::Load(yaml_text);
	}
	catch(const YAML::Exception& e)
	{
		throw ConfigError("line " + std::to_string(e.mark.line + 1) + ", column " + std::to_string(e.mark.column + 1) +
		                  ": " + e.msg);
	}
	if(!root || root.IsNull())
		throw ConfigError("empty configuration");
	const Section top(root, "config");
	top.only({"name", "N", "state", "gravity", "seed", "scheme", "path", "time", "rng_seed", "output", "aci",
	          "n_max"});

	ScenarioConfig c;
	c.name = top.has("name") ? top.text("name") : c.name;
	c.atoms = top.integer_in("N", 1, 4096);
	if(top.has("state"))
		c.state = parse_state(top.sub("state"), c.atoms);
	else
		c.state = ProfileSpec{{1.0}};
	c.gravity = parse_gravity(top.sub("gravity"));

	if(top.has("seed"))
	{
		const Section s = top.sub("seed");
		s.only({"phi0", "infidelity"});
		c.seed.phi0 = s.number_or("phi0", 0.0);
		c.seed.infidelity = s.number_or("infidelity", 0.0);
		if(!(c.seed.infidelity >= 0.0 && c.seed.infidelity < 1.0))
			fail(s.get("infidelity"), "infidelity must lie in [0, 1)");
	}

	if(top.has("scheme"))
	{
		const std::string k = top.text("scheme");
		if(k == "nonlocal_parity")
			c.scheme = SchemeKind::nonlocal_parity;
		else if(k == "local_quadrature")
			c.scheme = SchemeKind::local_quadrature;
		else if(k == "position_observable")
			c.scheme = SchemeKind::position_observable;
		else
			fail(top.get("scheme"), "scheme must be nonlocal_parity, local_quadrature or position_observable");
	}
	if(top.has("path"))
	{
		const std::string p = top.text("path");
		if(p == "analytic")
			c.path = EvalPath::analytic;
		else if(p == "oracle")
			c.path = EvalPath::oracle;
		else if(p == "both")
			c.path = EvalPath::both;
		else
			fail(top.get("path"), "path must be analytic, oracle or both");
	}

	const Section t = top.sub("time");
	t.only({"start", "stop", "steps"});
	c.time.start = t.number_or("start", 0.0);
	c.time.stop = t.number("stop");
	c.time.steps = t.integer_in("steps", 2, 100'000'000);
	if(c.time.start < 0.0)
		fail(t.get("start"), "time.start must be >= 0");
	if(!(c.time.stop > c.time.start))
		fail(t.get("stop"), "time.stop must exceed time.start");

	if(top.has("rng_seed"))
	{
		const std::string s = trim(top.text("rng_seed"));
		char* stop = nullptr;
		c.rng_seed = std::strtoull(s.c_str(), &stop, 10);
		if(s.empty() || s[0] == '-' || stop != s.c_str() + s.size())
			fail(top.get("rng_seed"), "rng_seed must be a non-negative integer");
	}
	if(top.has("output"))
		c.output = top.text("output");
	if(top.has("n_max"))
	{
		c.n_max = top.integer_in("n_max", 0, 100000);
		if(c.n_max != 0 && c.n_max < c.atoms + 1)
			fail(top.get("n_max"), "n_max must be 0 (default) or >= N + 1");
	}
	if(top.has("aci"))
	{
		const Section a = top.sub("aci");
		a.only({"l_up", "l_down", "window"});
		AciSpec spec;
		spec.l_up = a.integer_in("l_up", 1, big);
		spec.l_down = a.integer_in("l_down", 1, big);
		if(spec.l_up < spec.l_down)
			fail(a.get("l_up"), "aci needs l_up >= l_down");
		spec.window = a.number("window");
		if(!(spec.window > 0.0))
			fail(a.get("window"), "aci.window must be > 0");
		c.aci = spec;
	}

	if(const auto* e = std::get_if<ExactSpec>(&c.state);
	   e && e->kind != ExactSpec::Kind::sequential && c.atoms % 2 != 0)
		fail(top.get("N"), "exact double-twisting states need even N");
	c.validate();
	return c;
}

ScenarioConfig load_scenario(const std::string& path)
{
	std::ifstream in(path);
	if(!in)
		throw ConfigError("cannot read config file '" + path + "'");
	std::ostringstream ss;
	ss << in.rdbuf();
	try
	{
		return parse_scenario(ss.str());
	}
	catch(const ConfigError& e)
	{
		throw ConfigError(path + ": " + e.what());
	}
}

std::string echo_scenario(const ScenarioConfig& c)
{
	YAML::Emitter out;
	out.SetDoublePrecision(17);
	out << YAML::BeginMap;
	out << YAML::Key << "name" << YAML::Value << c.name;
	out << YAML::Key << "N" << YAML::Value << c.atoms;

	out << YAML::Key << "state" << YAML::Value << YAML::BeginMap;
	if(const auto* v = std::get_if<VariationalSpec>(&c.state))
	{
		out << YAML::Key << "variational" << YAML::Value << YAML::BeginMap;
		switch(v->target.kind)
		{
		case TargetSpec::Kind::eigenstate:
			out << YAML::Key << "target" << YAML::Value << "eigenstate" << YAML::Key << "M" << YAML::Value
			    << v->target.m1;
			break;
		case TargetSpec::Kind::clock:
			out << YAML::Key << "target" << YAML::Value << "clock" << YAML::Key << "M1" << YAML::Value << v->target.m1
			    << YAML::Key << "M2" << YAML::Value << v->target.m2;
			break;
		case TargetSpec::Kind::coherent:
			out << YAML::Key << "target" << YAML::Value << "coherent";
			break;
		}
		out << YAML::Key << "p" << YAML::Value << v->p;
		out << YAML::Key << "lambda" << YAML::Value << v->lambda;
		out << YAML::Key << "optimizer" << YAML::Value << YAML::BeginMap;
		out << YAML::Key << "restarts" << YAML::Value << v->optimizer.restarts;
		out << YAML::Key << "max_evals" << YAML::Value << v->optimizer.max_evals;
		out << YAML::Key << "tolerance" << YAML::Value << v->optimizer.tolerance;
		out << YAML::Key << "hops" << YAML::Value << v->optimizer.hops;
		out << YAML::Key << "hop_step" << YAML::Value << v->optimizer.hop_step;
		out << YAML::EndMap << YAML::EndMap;
	}
	else if(const auto* e = std::get_if<ExactSpec>(&c.state))
	{
		out << YAML::Key << "exact" << YAML::Value << YAML::BeginMap;
		switch(e->kind)
		{
		case ExactSpec::Kind::noon_minus_one:
			out << YAML::Key << "kind" << YAML::Value << "noon_minus_one";
			break;
		case ExactSpec::Kind::psi_alpha:
			out << YAML::Key << "kind" << YAML::Value << "psi_alpha";
			out << YAML::Key << "alpha" << YAML::Value << e->alpha.text;
			out << YAML::Key << "k" << YAML::Value << e->k;
			break;
		case ExactSpec::Kind::sequential:
			out << YAML::Key << "kind" << YAML::Value << "sequential";
			if(const auto* s = std::get_if<sequential::Eigenstate>(&e->sequential))
				out << YAML::Key << "target" << YAML::Value << "eigenstate" << YAML::Key << "l" << YAML::Value << s->l;
			else if(const auto* k = std::get_if<sequential::Clock>(&e->sequential))
				out << YAML::Key << "target" << YAML::Value << "clock" << YAML::Key << "lo" << YAML::Value << k->lo
				    << YAML::Key << "hi" << YAML::Value << k->hi;
			else
			{
				const auto& p = std::get<sequential::Profile>(e->sequential);
				out << YAML::Key << "target" << YAML::Value << "profile" << YAML::Key << "first" << YAML::Value
				    << p.first << YAML::Key << "thetas" << YAML::Value << YAML::Flow << p.thetas;
			}
			break;
		}
		out << YAML::EndMap;
	}
	else
	{
		out << YAML::Key << "profile" << YAML::Value << YAML::Flow << std::get<ProfileSpec>(c.state).weights;
	}
	out << YAML::EndMap;

	const GravityContext& g = c.gravity;
	out << YAML::Key << "gravity" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "omega_eg" << YAML::Value << g.omega_eg;
	out << YAML::Key << "g" << YAML::Value << g.g;
	out << YAML::Key << "delta_z" << YAML::Value << g.delta_z;
	if(g.potentials)
		out << YAML::Key << "potentials" << YAML::Value << YAML::Flow << YAML::BeginSeq << g.potentials->first
		    << g.potentials->second << YAML::EndSeq;
	out << YAML::Key << "c" << YAML::Value << g.c;
	out << YAML::Key << "hbar" << YAML::Value << g.hbar;
	out << YAML::Key << "reference_node" << YAML::Value << reference_name(g.reference);
	out << YAML::EndMap;

	out << YAML::Key << "seed" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "phi0" << YAML::Value << c.seed.phi0;
	out << YAML::Key << "infidelity" << YAML::Value << c.seed.infidelity;
	out << YAML::EndMap;

	out << YAML::Key << "scheme" << YAML::Value << to_string(c.scheme);
	out << YAML::Key << "path" << YAML::Value << to_string(c.path);
	out << YAML::Key << "time" << YAML::Value << YAML::BeginMap;
	out << YAML::Key << "start" << YAML::Value << c.time.start;
	out << YAML::Key << "stop" << YAML::Value << c.time.stop;
	out << YAML::Key << "steps" << YAML::Value << c.time.steps;
	out << YAML::EndMap;
	out << YAML::Key << "rng_seed" << YAML::Value << c.rng_seed;
	out << YAML::Key << "output" << YAML::Value << c.output;
	out << YAML::Key << "n_max" << YAML::Value << c.n_max;
	if(c.aci)
	{
		out << YAML::Key << "aci" << YAML::Value << YAML::BeginMap;
		out << YAML::Key << "l_up" << YAML::Value << c.aci->l_up;
		out << YAML::Key << "l_down" << YAML::Value << c.aci->l_down;
		out << YAML::Key << "window" << YAML::Value << c.aci->window;
		out << YAML::EndMap;
	}
	out << YAML::EndMap;
	return std::string(out.c_str()) + "\n";
}

std::string parameter_hash(const ScenarioConfig& config)
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for(const unsigned char ch : echo_scenario(config))
	{
		h ^= ch;
		h *= 0x100000001b3ULL;
	}
	char buf[17];
	std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
	return buf;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b)
{
	return echo_scenario(a) == echo_scenario(b);
}

SymmetricUnitary amplification_unitary(const DickeState& psi)
{
	if(std::abs(psi[0]) > 1e-12)
		throw std::domain_error("amplification target must have no vacuum component");
	const int d = psi.dim();
	// w = psi with the phase of psi_1 removed, so <1|w> is real and >= 0
	const double a1 = std::arg(psi[1]);
	ComplexVector w = psi.amplitudes() * std::polar(1.0, -a1);
	w[0] = 0.0;
	ComplexVector v = -w;
	v[1] += 1.0;
	ComplexMatrix h = ComplexMatrix::Identity(d, d);
	const double vn = v.squaredNorm();
	if(vn > 1e-30)
		h -= 2.0 * v * v.adjoint() / vn;
	h.col(1) *= std::polar(1.0, a1);
	return SymmetricUnitary(std::move(h));
}

PreparedScenario prepare_state(const ScenarioConfig& c)
{
	c.validate();
	const EnsembleDims dims(c.atoms);
	const TwoNodeState seed = seed_state(dims, c.seed);
	const auto lift = [&](const SymmetricUnitary& u) { return apply_local(u, u, seed); };

	if(const auto* v = std::get_if<VariationalSpec>(&c.state))
	{
		const CostSpec cost = CostSpec::target_distribution(v->target.build(dims), v->lambda, v->target.label());
		OptimizerConfig oc = v->optimizer;
		oc.seed = c.rng_seed;
		OptimizationResult r = optimize(dims, cost, v->p, oc);
		SymmetricUnitary u = build_circuit(dims, r.ansatz);
		TwoNodeState s = lift(u);
		return {std::move(s), std::move(u), std::move(r)};
	}
	if(const auto* e = std::get_if<ExactSpec>(&c.state))
	{
		switch(e->kind)
		{
		case ExactSpec::Kind::noon_minus_one:
		{
			SymmetricUnitary u = u_dt(dims);
			return {lift(u), u, std::nullopt};
		}
		case ExactSpec::Kind::psi_alpha:
		{
			SymmetricUnitary u = v_alpha(dims, {e->alpha.value, e->k}) * u_dt(dims);
			return {lift(u), u, std::nullopt};
		}
		case ExactSpec::Kind::sequential:
		{
			SymmetricUnitary u = amplification_unitary(sequential_target(c.atoms, e->sequential));
			return {lift(u), u, std::nullopt};
		}
		}
	}
	const auto& w = std::get<ProfileSpec>(c.state).weights;
	RealVector amp = RealVector::Zero(dims.dim());
	for(std::size_t i = 0; i < w.size(); ++i)
		amp[static_cast<Eigen::Index>(i) + 1] = std::sqrt(w[i]);
	SymmetricUnitary u = amplification_unitary(DickeState::normalized(amp.cast<cplx>()));
	return {lift(u), u, std::nullopt};
}

RamseyScenario make_ramsey(const ScenarioConfig& c, const PreparedScenario& prepared)
{
	MeasurementScheme scheme{c.scheme, std::nullopt};
	if(c.scheme == SchemeKind::local_quadrature)
		scheme.decoder = prepared.u_p.adjoint();
	return {prepared.state, c.gravity, scheme, c.seed.phi0, linear_grid(c.time.start, c.time.stop, c.time.steps),
	        c.n_max};
}

} // namespace dickenet
