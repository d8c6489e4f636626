#include "tvd/core.hpp"

namespace tvd {

SignalKind parse_signal_kind(const std::string& name)
{
  if (name == "two") return SignalKind::two;
  if (name == "four") return SignalKind::four;
  if (name == "worst") return SignalKind::worst;
  if (name == "custom") return SignalKind::custom;
  throw ArgumentError("unknown signal '" + name + "' (expected two, four or worst)");
}

std::string to_string(SignalKind kind)
{
  switch (kind) {
    case SignalKind::two: return "two";
    case SignalKind::four: return "four";
    case SignalKind::worst: return "worst";
    case SignalKind::custom: return "custom";
  }
  return "custom";
}

ImageMatrix make_signal(const GridSignal& signal)
{
  const Index n = signal.n;
  if (n < 2) throw ArgumentError("signal side length must be at least 2");
  if ((signal.kind == SignalKind::two || signal.kind == SignalKind::four) && n % 2 != 0)
    throw ArgumentError("signals 'two' and 'four' need an even side length");

  ImageMatrix theta(n, n);
  const Index half = n / 2;
  switch (signal.kind) {
    case SignalKind::two:
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) theta(i, j) = j >= half ? 1.0 : 0.0;
      break;
    case SignalKind::four:
      theta.topLeftCorner(half, half).setConstant(1.0);
      theta.topRightCorner(half, half).setConstant(2.0);
      theta.bottomLeftCorner(half, half).setConstant(0.0);
      theta.bottomRightCorner(half, half).setConstant(1.0);
      break;
    case SignalKind::worst:
      // 1-based i + j > n  <=>  0-based i + j > n - 2
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) theta(i, j) = i + j + 2 > n ? 1.0 : 0.0;
      break;
    case SignalKind::custom:
      throw ArgumentError("custom signals have no generator; load them from a file");
  }
  return theta;
}

}  // namespace tvd
