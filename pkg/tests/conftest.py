import pytest

from bridgewalk.graphs import bridge_graphs, complete_graph, cycle_graph

EPS = 0.01


@pytest.fixture(scope="session")
def k5k5():
    return bridge_graphs(complete_graph(5), 0, complete_graph(5), 0)


@pytest.fixture(scope="session")
def k5k3():
    return bridge_graphs(complete_graph(5), 0, complete_graph(3), 0)


@pytest.fixture(scope="session")
def k3k5():
    return bridge_graphs(complete_graph(3), 0, complete_graph(5), 0)


@pytest.fixture(scope="session")
def k6c15():
    return bridge_graphs(complete_graph(6), 0, cycle_graph(15), 0)
