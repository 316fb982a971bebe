#include "kanlab/io/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kanlab/io/format.hpp"

namespace kanlab::io {

namespace {

constexpr const char* kMagic = "kanlab-model v1";

void save_kan(std::ostream& os, const kan::KanNetwork& net) {
  os << "kind kan\n";
  os << "shape";
  for (int w : net.shape) os << ' ' << w;
  os << '\n';
  os << "degree " << net.config.degree << '\n';
  os << "grid " << net.config.grid << '\n';
  os << "domain " << format_double(net.config.domain_min) << ' '
     << format_double(net.config.domain_max) << '\n';
  os << "linear " << (net.config.linear_enabled ? 1 : 0) << '\n';
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const kan::KanLayer& layer = net.layers[l];
    for (int j = 0; j < layer.n_out; ++j)
      for (int i = 0; i < layer.n_in; ++i) {
        const kan::Edge& e = layer.edge(j, i);
        os << "edge " << l << ' ' << j << ' ' << i;
        for (double c : e.spline.coeffs) os << ' ' << format_double(c);
        if (e.linear_enabled) os << ' ' << format_double(e.linear_weight);
        os << '\n';
      }
  }
  os << "end\n";
}

void save_mlp(std::ostream& os, const mlp::MlpNetwork& net) {
  os << "kind mlp\n";
  os << "shape";
  for (int w : net.shape) os << ' ' << w;
  os << '\n';
  os << "activations";
  for (const mlp::MlpLayer& layer : net.layers)
    os << ' ' << mlp::activation_name(layer.activation);
  os << '\n';
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const mlp::MlpLayer& layer = net.layers[l];
    os << "weights " << l;
    for (double w : layer.weights) os << ' ' << format_double(w);
    os << '\n';
    os << "biases " << l;
    for (double b : layer.biases) os << ' ' << format_double(b);
    os << '\n';
  }
  os << "end\n";
}

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error("model file: " + what);
}

std::vector<std::string> next_tokens(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail("unexpected end of file");
  std::istringstream ls(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ls >> tok) tokens.push_back(tok);
  return tokens;
}

long parse_int(const std::string& tok) {
  long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    fail("malformed integer: '" + tok + "'");
  return v;
}

std::vector<int> parse_shape(const std::vector<std::string>& tokens) {
  if (tokens.size() < 3 || tokens[0] != "shape")
    fail("expected a shape line with at least two widths");
  std::vector<int> shape;
  for (std::size_t k = 1; k < tokens.size(); ++k) {
    const long w = parse_int(tokens[k]);
    if (w < 1 || w > 1'000'000) fail("layer width out of range");
    shape.push_back(static_cast<int>(w));
  }
  return shape;
}

kan::KanNetwork load_kan(std::istream& is) {
  kan::KanNetwork net;
  net.shape = parse_shape(next_tokens(is));

  auto header_int = [&](const char* key, long lo, long hi) {
    const auto tokens = next_tokens(is);
    if (tokens.size() != 2 || tokens[0] != key)
      fail(std::string("expected '") + key + " <value>'");
    const long v = parse_int(tokens[1]);
    if (v < lo || v > hi) fail(std::string(key) + " out of range");
    return v;
  };
  net.config.degree = static_cast<int>(header_int("degree", 0, 64));
  net.config.grid = static_cast<int>(header_int("grid", 1, 1'000'000));

  {
    const auto tokens = next_tokens(is);
    if (tokens.size() != 3 || tokens[0] != "domain")
      fail("expected 'domain <min> <max>'");
    net.config.domain_min = parse_double(tokens[1]);
    net.config.domain_max = parse_double(tokens[2]);
    if (!(net.config.domain_min < net.config.domain_max))
      fail("domain is empty");
  }
  {
    const auto tokens = next_tokens(is);
    if (tokens.size() != 2 || tokens[0] != "linear" ||
        (tokens[1] != "0" && tokens[1] != "1"))
      fail("expected 'linear 0|1'");
    net.config.linear_enabled = tokens[1] == "1";
  }

  const interp::KnotVector kv =
      interp::uniform_knots(net.config.domain_min, net.config.domain_max,
                            net.config.grid, net.config.degree);
  const std::size_t nb = static_cast<std::size_t>(kv.basis_count());
  const std::size_t per_edge = nb + (net.config.linear_enabled ? 1 : 0);

  for (std::size_t l = 0; l + 1 < net.shape.size(); ++l) {
    kan::KanLayer layer;
    layer.n_in = net.shape[l];
    layer.n_out = net.shape[l + 1];
    layer.edges.reserve(static_cast<std::size_t>(layer.n_in) * layer.n_out);
    for (int j = 0; j < layer.n_out; ++j)
      for (int i = 0; i < layer.n_in; ++i) {
        const auto tokens = next_tokens(is);
        if (tokens.size() != 4 + per_edge || tokens[0] != "edge" ||
            parse_int(tokens[1]) != static_cast<long>(l) ||
            parse_int(tokens[2]) != j || parse_int(tokens[3]) != i)
          fail("expected edge " + std::to_string(l) + " " +
               std::to_string(j) + " " + std::to_string(i) + " with " +
               std::to_string(per_edge) + " values");
        std::vector<double> coeffs(nb);
        for (std::size_t k = 0; k < nb; ++k)
          coeffs[k] = parse_double(tokens[4 + k]);
        double w = 0.0;
        if (net.config.linear_enabled) w = parse_double(tokens[4 + nb]);
        layer.edges.push_back(kan::Edge{interp::Spline1D(kv, std::move(coeffs)),
                                        w, net.config.linear_enabled});
      }
    net.layers.push_back(std::move(layer));
  }
  const auto tokens = next_tokens(is);
  if (tokens.size() != 1 || tokens[0] != "end") fail("expected 'end'");
  return net;
}

mlp::MlpNetwork load_mlp(std::istream& is) {
  mlp::MlpNetwork net;
  net.shape = parse_shape(next_tokens(is));
  const std::size_t n_layers = net.shape.size() - 1;

  std::vector<mlp::Activation> acts;
  {
    const auto tokens = next_tokens(is);
    if (tokens.size() != 1 + n_layers || tokens[0] != "activations")
      fail("expected one activation per layer");
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      try {
        acts.push_back(mlp::activation_from_name(tokens[k]));
      } catch (const std::domain_error& e) {
        fail(e.what());
      }
    }
  }

  for (std::size_t l = 0; l < n_layers; ++l) {
    mlp::MlpLayer layer;
    layer.n_in = net.shape[l];
    layer.n_out = net.shape[l + 1];
    layer.activation = acts[l];
    const std::size_t nw =
        static_cast<std::size_t>(layer.n_in) * layer.n_out;
    {
      const auto tokens = next_tokens(is);
      if (tokens.size() != 2 + nw || tokens[0] != "weights" ||
          parse_int(tokens[1]) != static_cast<long>(l))
        fail("expected weights " + std::to_string(l) + " with " +
             std::to_string(nw) + " values");
      layer.weights.resize(nw);
      for (std::size_t k = 0; k < nw; ++k)
        layer.weights[k] = parse_double(tokens[2 + k]);
    }
    {
      const std::size_t nbias = static_cast<std::size_t>(layer.n_out);
      const auto tokens = next_tokens(is);
      if (tokens.size() != 2 + nbias || tokens[0] != "biases" ||
          parse_int(tokens[1]) != static_cast<long>(l))
        fail("expected biases " + std::to_string(l) + " with " +
             std::to_string(nbias) + " values");
      layer.biases.resize(nbias);
      for (std::size_t k = 0; k < nbias; ++k)
        layer.biases[k] = parse_double(tokens[2 + k]);
    }
    net.layers.push_back(std::move(layer));
  }
  const auto tokens = next_tokens(is);
  if (tokens.size() != 1 || tokens[0] != "end") fail("expected 'end'");
  return net;
}

}  // namespace

void save_model(std::ostream& os, const Model& model) {
  os << kMagic << '\n';
  if (const auto* kan_net = std::get_if<kan::KanNetwork>(&model))
    save_kan(os, *kan_net);
  else
    save_mlp(os, std::get<mlp::MlpNetwork>(model));
}

Model load_model(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    fail(std::string("missing '") + kMagic + "' header");
  const auto tokens = next_tokens(is);
  if (tokens.size() != 2 || tokens[0] != "kind")
    fail("expected 'kind kan|mlp'");
  if (tokens[1] == "kan") return load_kan(is);
  if (tokens[1] == "mlp") return load_mlp(is);
  fail("unknown model kind: '" + tokens[1] + "'");
}

void save_model_file(const std::string& path, const Model& model) {
  std::ofstream os(path, std::ios::binary);
  if (!os.is_open())
    throw std::runtime_error("cannot open file for writing: " + path);
  save_model(os, model);
  os.flush();
  if (!os.good()) throw std::runtime_error("write failed: " + path);
}

Model load_model_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.is_open())
    throw std::runtime_error("cannot open file for reading: " + path);
  return load_model(is);
}

}  // namespace kanlab::io
