"""Built-in manifold families: Lie evaluation maps, matrix Veronese, wedge products and explicit JSON."""
