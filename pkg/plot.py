import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from product import ReachabilityGraph


def plot_exploration_profile(rg: ReachabilityGraph, path: str, title: str = 'Exploration profile'):
    """Save a bar chart of the new states found in each breadth-first layer.

    Args:
        rg: Reachability graph whose layer counters are plotted
        path: Output image file, format taken from the extension
        title: Chart title

    Returns:
        Tuple of (success, message)
    """
    layers = list(rg.layers)
    if not layers:
        return False, 'The graph has no layer counters to plot.'
    try:
        fig, ax = plt.subplots(figsize=(10, 5))
        bars = ax.bar(range(len(layers)), layers, color='steelblue')
        ax.set_xlabel('Layer (distance from the initial state)')
        ax.set_ylabel('New states')
        ax.set_title(f"{title} ({len(rg.states)} states, {len(rg.edges)} edges)")
        ax.grid(True, alpha=0.3, axis='y')
        if len(layers) <= 40:
            for bar, value in zip(bars, layers):
                ax.text(bar.get_x() + bar.get_width() / 2, bar.get_height(), str(value),
                        ha='center', va='bottom', fontsize=8)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
        return True, f"Exploration profile saved to {path}"
    except Exception as e:
        return False, f"Failed to save exploration profile: {str(e)}"
