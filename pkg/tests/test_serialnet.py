"""Link latency, FIFO ordering, and registry identity."""

import pytest

from firesim.serialnet import (COM1, COM15, LinkClosedError, LinkConfig,
                               SerialLink, standard_registry)


def make_link(baud):
    return SerialLink(LinkConfig("test", baud))


class TestLatency:
    def test_ten_bytes_at_9600_complete_after_11_ms(self):
        link = make_link(9600)
        link.write("a", b"0123456789", 0)
        assert len(link.read("b", 10)) < 10
        link2 = make_link(9600)
        link2.write("a", b"0123456789", 0)
        assert link2.read("b", 11) == b"0123456789"

    def test_one_byte_at_115200_after_1_ms(self):
        link = make_link(115200)
        link.write("a", b"X", 0)
        assert link.read("b", 0) == b""
        assert link.read("b", 1) == b"X"

    def test_two_bytes_at_115200_arrive_together(self):
        link = make_link(115200)
        link.write("a", b"AB", 0)
        assert link.read("b", 0) == b""
        assert link.read("b", 1) == b"AB"

    def test_empty_write_is_noop(self):
        link = make_link(9600)
        link.write("a", b"", 0)
        assert link.pending("b") == 0

    def test_burst_latency_formula(self):
        # latency of an n-byte burst is exactly ceil(n * 10000 / baud)
        for baud in (9600, 115200):
            for n in (1, 2, 7, 10, 33):
                link = make_link(baud)
                link.write("a", bytes(n), 0)
                expected = -(-n * 10_000 // baud)
                assert link.read("b", expected - 1) != bytes(n)
                link2 = make_link(baud)
                link2.write("a", bytes(n), 0)
                assert link2.read("b", expected) == bytes(n)


class TestOrdering:
    def test_read_before_write_empty(self):
        link = make_link(9600)
        assert link.read("b", 100) == b""

    def test_fifo_across_bursts(self):
        link = make_link(9600)
        link.write("a", b"abc", 0)
        link.write("a", b"def", 2)
        assert link.read("b", 1000) == b"abcdef"

    def test_partial_drain_preserves_order(self):
        link = make_link(9600)
        link.write("a", b"abcdef", 0)
        got = b""
        for t in range(0, 10):
            got += link.read("b", t)
        assert got == b"abcdef"

    def test_conservation(self):
        link = make_link(115200)
        total_in = 0
        total_out = 0
        for t in range(50):
            if t % 3 == 0:
                link.write("a", bytes([t]) * (t % 5), t)
                total_in += t % 5
            total_out += len(link.read("b", t))
            assert total_out <= total_in
        total_out += len(link.read("b", 10_000))
        assert total_out == total_in

    def test_duplex_sides_independent(self):
        link = make_link(115200)
        link.write("a", b"to-b", 0)
        link.write("b", b"to-a", 0)
        assert link.read("a", 100) == b"to-a"
        assert link.read("b", 100) == b"to-b"


class TestEndpoints:
    def test_endpoint_send_recv(self):
        link = make_link(115200)
        a = link.endpoint("a")
        b = link.endpoint("b")
        a.send(b"hi", 0)
        assert b.recv(1) == b"hi"
        assert b.pending() == 0

    def test_next_ready(self):
        link = make_link(9600)
        ep = link.endpoint("b")
        assert ep.next_ready() is None
        link.write("a", b"Z", 5)
        assert ep.next_ready() == 5 + 2  # one 10-bit frame at 9600: ceil(1.04 ms)


class TestClosedLink:
    def test_write_after_close(self):
        link = make_link(9600)
        link.close()
        with pytest.raises(LinkClosedError):
            link.write("a", b"x", 0)

    def test_read_after_close(self):
        link = make_link(9600)
        link.close()
        with pytest.raises(LinkClosedError):
            link.read("a", 0)


class TestConfigAndRegistry:
    def test_standard_links(self):
        assert COM1.baud == 115200
        assert COM15.baud == 9600
        for cfg in (COM1, COM15):
            assert (cfg.data_bits, cfg.stop_bits, cfg.parity) == (8, 1, "none")

    def test_registry_lookup_by_identity(self):
        registry = standard_registry()
        assert registry.lookup("COM15").config.baud == 9600
        assert registry.lookup("COM1").config.baud == 115200
        with pytest.raises(KeyError):
            registry.lookup("COM3")

    def test_duplicate_registration_rejected(self):
        registry = standard_registry()
        with pytest.raises(ValueError):
            registry.open_link(COM1)

    def test_non_8n1_rejected(self):
        with pytest.raises(ValueError):
            LinkConfig("bad", 9600, parity="even")
