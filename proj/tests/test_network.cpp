#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "grading/error.hpp"
#include "grading/model_io.hpp"
#include "grading/network.hpp"
#include "grading/util.hpp"

using namespace grading;

namespace {

NetworkStructure small(int in, std::vector<int> hidden, int out, bool jump,
                       ActivationKind act = ActivationKind::sigmoid) {
  NetworkStructure s;
  s.input_size = in;
  s.hidden_layers = std::move(hidden);
  s.output_size = out;
  s.jump_connections = jump;
  s.activation = act;
  s.output_activation = act;
  return s;
}

bool exact_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

}  // namespace

TEST_CASE("init_network is deterministic in the seed") {
  const NetworkStructure s = small(5, {4, 3}, 2, true);
  const Network a = init_network(s, 99);
  const Network b = init_network(s, 99);
  const Network c = init_network(s, 100);
  for (std::size_t l = 0; l < a.weights.size(); ++l)
    CHECK(exact_equal(a.weights[l], b.weights[l]));
  CHECK(exact_equal(a.jump, b.jump));
  CHECK_FALSE(exact_equal(a.weights[0], c.weights[0]));
}

TEST_CASE("weight counts follow the closed form") {
  const NetworkStructure s = small(768, {768, 768}, 6, false);
  CHECK(s.weight_count() ==
        std::size_t(768 * 768 + 768 + 768 * 768 + 768 + 768 * 6 + 6));

  const Network net = init_network(s, 1);
  std::size_t actual = 0;
  for (const auto& w : net.weights) actual += static_cast<std::size_t>(w.size());
  for (const auto& b : net.biases) actual += static_cast<std::size_t>(b.size());
  CHECK(actual == s.weight_count());
}

TEST_CASE("jump structure adds an input->output block") {
  const Network net = init_network(small(2, {2}, 1, true), 3);
  REQUIRE(net.jump.rows() == 1);
  REQUIRE(net.jump.cols() == 2);
  CHECK(net.structure.weight_count() ==
        std::size_t(2 * 2 + 2 + 2 * 1 + 1 + 2 * 1));

  const Network flat = init_network(small(2, {2}, 1, false), 3);
  CHECK(flat.jump.size() == 0);
}

TEST_CASE("init bounds scale with fan-in") {
  const Network net = init_network(small(64, {16}, 4, false), 5);
  const double r0 = 1.0 / std::sqrt(64.0);
  CHECK(net.weights[0].cwiseAbs().maxCoeff() <= r0);
  const double r1 = 1.0 / std::sqrt(16.0);
  CHECK(net.weights[1].cwiseAbs().maxCoeff() <= r1);
}

TEST_CASE("forward with zero weights and sigmoid gives 0.5 everywhere") {
  Network net = init_network(small(4, {3}, 2, false), 1);
  for (auto& w : net.weights) w.setZero();
  for (auto& b : net.biases) b.setZero();
  const Eigen::VectorXd out = forward(net, Eigen::VectorXd::Ones(4));
  for (Eigen::Index i = 0; i < out.size(); ++i) CHECK(out(i) == 0.5);
}

TEST_CASE("forward matches a hand computation on a 1-[1]-1 net") {
  Network net = init_network(small(1, {1}, 1, false), 1);
  net.weights[0](0, 0) = 1.0;
  net.biases[0](0) = 0.0;
  net.weights[1](0, 0) = 1.0;
  net.biases[1](0) = 0.0;
  Eigen::VectorXd x(1);
  x(0) = 0.0;
  const double out = forward(net, x)(0);
  CHECK(out == doctest::Approx(0.6224593312018546).epsilon(1e-12));
}

TEST_CASE("with linear activations and zero hidden path, jump dominates") {
  Network net = init_network(small(3, {2}, 2, true, ActivationKind::linear), 2);
  for (auto& w : net.weights) w.setZero();
  for (auto& b : net.biases) b.setZero();
  net.jump << 1, 2, 3, 4, 5, 6;
  Eigen::VectorXd x(3);
  x << 1, 1, 1;
  const Eigen::VectorXd out = forward(net, x);
  CHECK(out(0) == 6.0);
  CHECK(out(1) == 15.0);
}

TEST_CASE("forward rejects a length mismatch") {
  const Network net = init_network(small(4, {3}, 2, false), 1);
  CHECK_THROWS_AS(forward(net, Eigen::VectorXd::Zero(5)), Error);
}

TEST_CASE("tomato classification takes the argmax, ties to the lowest stage") {
  Eigen::VectorXd out(6);
  out << 0.1, 0.9, 0.2, 0.1, 0.1, 0.1;
  CHECK(classify_output(Task::tomato, out) == 1);  // Breakers

  out << 0.3, 0.3, 0.3, 0.3, 0.3, 0.3;
  CHECK(classify_output(Task::tomato, out) == 0);  // Green by tie-break

  out << 0.2, 0.4, 0.4, 0.1, 0.0, 0.0;
  CHECK(classify_output(Task::tomato, out) == 1);
}

TEST_CASE("egg decision boundary sits at 0.5, accepting on the boundary") {
  Eigen::VectorXd out(1);
  out << 0.5;
  CHECK(classify_output(Task::egg, out) == static_cast<int>(EggGrade::accept));
  out << 0.4999;
  CHECK(classify_output(Task::egg, out) == static_cast<int>(EggGrade::reject));
}

TEST_CASE("classify rejects a task/shape mismatch") {
  Eigen::VectorXd six(6);
  six.setZero();
  CHECK_THROWS_AS(classify_output(Task::egg, six), Error);
  Eigen::VectorXd one(1);
  one.setZero();
  CHECK_THROWS_AS(classify_output(Task::tomato, one), Error);

  const Network net = init_network(small(768, {4}, 1, false), 1);
  SpectralPattern p;
  CHECK_THROWS_AS(classify(net, p, Task::tomato), Error);
}

TEST_CASE("argmax label is invariant under increasing transforms") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd out(6);
    for (int i = 0; i < 6; ++i) out(i) = rng.uniform();
    const int label = classify_output(Task::tomato, out);

    Eigen::VectorXd scaled = 3.0 * out.array() + 1.0;
    CHECK(classify_output(Task::tomato, scaled) == label);

    Eigen::VectorXd squashed = out.array().tanh();
    CHECK(classify_output(Task::tomato, squashed) == label);
  }
}

TEST_CASE("target encoding is one-hot for tomato, scalar for egg") {
  const Eigen::VectorXd t = encode_target(Task::tomato, 3);
  REQUIRE(t.size() == 6);
  CHECK(t(3) == 1.0);
  CHECK(t.sum() == 1.0);

  CHECK(encode_target(Task::egg, static_cast<int>(EggGrade::accept))(0) == 1.0);
  CHECK(encode_target(Task::egg, static_cast<int>(EggGrade::reject))(0) == 0.0);
  CHECK_THROWS_AS(encode_target(Task::tomato, 6), Error);
}

TEST_CASE("model files round-trip bit-exactly") {
  const auto dir = fixtures::temp_dir("model_io");
  const Network net = init_network(small(7, {5, 4}, 3, true,
                                         ActivationKind::tanh), 42);
  save_model(dir / "m.json", net, Task::tomato, "{\"run\":9}");

  const LoadedModel back = load_model(dir / "m.json");
  CHECK(back.task == Task::tomato);
  CHECK(back.network.structure == net.structure);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    CHECK(exact_equal(back.network.weights[l], net.weights[l]));
    CHECK(exact_equal(back.network.biases[l], net.biases[l]));
  }
  CHECK(exact_equal(back.network.jump, net.jump));
}

TEST_CASE("model loader rejects malformed files") {
  const auto dir = fixtures::temp_dir("model_bad");
  CHECK_THROWS_AS(load_model(dir / "missing.json"), IoError);

  grading::write_file_atomic(dir / "garbage.json", "{not json");
  CHECK_THROWS_AS(load_model(dir / "garbage.json"), DecodeError);

  grading::write_file_atomic(dir / "wrong.json", "{\"format\":\"other\"}");
  CHECK_THROWS_AS(load_model(dir / "wrong.json"), DecodeError);
}
