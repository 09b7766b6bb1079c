pytest_plugins = ["gradealg.pytest_plugin"]
