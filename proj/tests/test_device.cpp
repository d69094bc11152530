#include <doctest.h>

#include <camoforge/device.hpp>

#include <cmath>

using namespace camoforge;

TEST_SUITE("device") {

TEST_CASE("write pulses program per the switching boundary") {
  FeFetDevice d;
  SUBCASE("+4V 1000ns sets LVT from unprogrammed") {
    d.apply_pulse(4.0, 1000.0);
    CHECK(d.state() == VthState::Lvt);
  }
  SUBCASE("-4V 1000ns sets HVT from LVT") {
    d.apply_pulse(4.0, 1000.0);
    d.apply_pulse(-4.0, 1000.0);
    CHECK(d.state() == VthState::Hvt);
  }
  SUBCASE("a 5ns pulse at 4V is below the 20ns anchor and does nothing") {
    d.apply_pulse(4.0, 5.0);
    CHECK(d.state() == VthState::Unprogrammed);
  }
  SUBCASE("lower amplitudes need wider pulses") {
    d.apply_pulse(3.5, 100.0);  // needs 200ns at 3.5V
    CHECK(d.state() == VthState::Unprogrammed);
    d.apply_pulse(3.5, 250.0);
    CHECK(d.state() == VthState::Lvt);
    d.apply_pulse(-3.0, 1500.0);  // needs 2000ns at 3V
    CHECK(d.state() == VthState::Lvt);
    d.apply_pulse(-3.0, 2500.0);
    CHECK(d.state() == VthState::Hvt);
  }
  SUBCASE("below every boundary amplitude nothing switches") {
    d.apply_pulse(2.0, 1e9);
    CHECK(d.state() == VthState::Unprogrammed);
  }
  SUBCASE("zero-width pulse is rejected") {
    CHECK_THROWS_AS(d.apply_pulse(4.0, 0.0), Error);
  }
}

TEST_CASE("programming is idempotent") {
  FeFetDevice d;
  d.apply_pulse(4.0, 500.0);
  FeFetDevice once = d;
  d.apply_pulse(4.0, 500.0);
  CHECK(d.state() == once.state());
}

TEST_CASE("read conduction against the programmed threshold") {
  FeFetDevice lvt(FeFetParams{}, VthState::Lvt);
  FeFetDevice hvt(FeFetParams{}, VthState::Hvt);
  CHECK(lvt.conducts(1.1));       // 1.1 > 0.5
  CHECK_FALSE(hvt.conducts(1.1)); // 1.1 < 1.7
  CHECK_FALSE(lvt.conducts(0.0));
  CHECK_FALSE(hvt.conducts(0.0));
  FeFetDevice blank;
  CHECK_THROWS_WITH_AS(blank.conducts(1.1), doctest::Contains("indeterminate"), Error);
}

TEST_CASE("reads never mutate state (nonvolatility)") {
  FeFetDevice d;
  d.apply_pulse(-4.0, 500.0);
  for (double v = 0.0; v <= 2.2; v += 0.01) {
    (void)d.conducts(v);
    CHECK(d.state() == VthState::Hvt);
  }
}

TEST_CASE("conduction is correct on a 0.01V grid over (0, 2.2)") {
  FeFetDevice lvt(FeFetParams{}, VthState::Lvt);
  FeFetDevice hvt(FeFetParams{}, VthState::Hvt);
  for (int i = 1; i < 220; ++i) {
    double v = i * 0.01;
    CHECK(lvt.conducts(v) == (v > 0.5));
    CHECK(hvt.conducts(v) == (v > 1.7));
    if (v > 0.5 + 1e-9 && v < 1.7 - 1e-9) {
      CHECK(lvt.conducts(v));
      CHECK_FALSE(hvt.conducts(v));
    }
  }
}

TEST_CASE("memory window and boundary invariants are enforced") {
  FeFetParams p;
  p.vth_low_v = 1.8;  // window collapses
  CHECK_THROWS_AS(FeFetDevice{p}, Error);
  FeFetParams q;
  q.boundary = {{4.0, 20.0}, {3.5, 10.0}};  // width must grow as amplitude drops
  CHECK_THROWS_AS(FeFetDevice{q}, Error);
}

TEST_CASE("block resolves buffer and inverter through the device path") {
  OperatingPoint op;
  SUBCASE("upper HVT, lower LVT follows the input (buffer)") {
    EncryptionBlock b;
    b.upper().apply_pulse(-op.v_write_v, op.t_write_ns);
    b.lower().apply_pulse(+op.v_write_v, op.t_write_ns);
    CHECK(b.mode() == BlockMode::Buffer);
    CHECK(b.output(true, op) == true);
    CHECK(b.output(false, op) == false);
  }
  SUBCASE("upper LVT, lower HVT inverts the input") {
    EncryptionBlock b;
    b.upper().apply_pulse(+op.v_write_v, op.t_write_ns);
    b.lower().apply_pulse(-op.v_write_v, op.t_write_ns);
    CHECK(b.mode() == BlockMode::Inverter);
    CHECK(b.output(true, op) == false);
    CHECK(b.output(false, op) == true);
  }
  SUBCASE("both HVT floats the output") {
    EncryptionBlock b;
    b.upper().apply_pulse(-op.v_write_v, op.t_write_ns);
    b.lower().apply_pulse(-op.v_write_v, op.t_write_ns);
    CHECK(b.mode() == BlockMode::Unresolved);
    CHECK_THROWS_WITH_AS(b.output(true, op), doctest::Contains("floating"), Error);
  }
  SUBCASE("both LVT contends") {
    EncryptionBlock b;
    b.upper().apply_pulse(+op.v_write_v, op.t_write_ns);
    b.lower().apply_pulse(+op.v_write_v, op.t_write_ns);
    CHECK_THROWS_WITH_AS(b.output(true, op), doctest::Contains("contended"), Error);
  }
}

TEST_CASE("program() always leaves complementary states") {
  OperatingPoint op;
  for (bool invert : {false, true}) {
    EncryptionBlock b;
    b.program(invert, op);
    CHECK(b.mode() == (invert ? BlockMode::Inverter : BlockMode::Buffer));
    CHECK(b.upper().state() != b.lower().state());
  }
}

TEST_CASE("program() with a sub-boundary write fails loudly") {
  OperatingPoint op;
  op.v_write_v = 2.0;  // below every boundary amplitude
  EncryptionBlock b;
  CHECK_THROWS_WITH_AS(b.program(true, op), doctest::Contains("programming failed"), Error);
}

TEST_CASE("buffer then inverter is negation; two inverters are identity") {
  OperatingPoint op;
  EncryptionBlock buf, inv, inv2;
  buf.program(false, op);
  inv.program(true, op);
  inv2.program(true, op);
  for (bool bit : {false, true}) {
    CHECK(inv.output(buf.output(bit, op), op) == !bit);
    CHECK(inv2.output(inv.output(bit, op), op) == bit);
  }
}

TEST_CASE("mc_delay: degenerate sigma gives zero variance exactly") {
  McDelayStats s = mc_delay(BlockMode::Buffer, 0.0, 1000, 42);
  CHECK(s.stddev_ns == 0.0);
  CHECK(s.spread_ns == 0.0);
  CHECK(s.mean_ns == doctest::Approx(DelayVariationModel{}.nominal_buffer_ns));
}

TEST_CASE("mc_delay: doubling sigma doubles the sample stddev") {
  McDelayStats a = mc_delay(BlockMode::Inverter, 0.05, 20000, 9);
  McDelayStats b = mc_delay(BlockMode::Inverter, 0.10, 20000, 9);
  CHECK(b.stddev_ns == doctest::Approx(2.0 * a.stddev_ns).epsilon(1e-9));
}

TEST_CASE("mc_delay: shipped defaults reproduce the target spreads") {
  McDelayStats buf = mc_delay(BlockMode::Buffer, DelayVariationModel{}.sigma_vth_v, 10000, 42);
  McDelayStats inv = mc_delay(BlockMode::Inverter, DelayVariationModel{}.sigma_vth_v, 10000, 42);
  CHECK(std::fabs(buf.spread_ns - 6.4) / 6.4 < 0.20);
  CHECK(std::fabs(inv.spread_ns - 4.5) / 4.5 < 0.20);
}

TEST_CASE("mc_delay: deterministic for a fixed seed") {
  McDelayStats a = mc_delay(BlockMode::Buffer, 0.05, 5000, 1234);
  McDelayStats b = mc_delay(BlockMode::Buffer, 0.05, 5000, 1234);
  CHECK(a.mean_ns == b.mean_ns);
  CHECK(a.stddev_ns == b.stddev_ns);
  CHECK(a.min_ns == b.min_ns);
  CHECK(a.max_ns == b.max_ns);
}

TEST_CASE("operating point sanity check") {
  FeFetParams p;
  OperatingPoint op;
  CHECK_NOTHROW(check_operating_point(p, op));
  op.v_read_v = 1.9;  // above vth_high
  CHECK_THROWS_AS(check_operating_point(p, op), Error);
}

}  // TEST_SUITE
