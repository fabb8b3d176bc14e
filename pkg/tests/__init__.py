# Tests for ppi_net_builder
