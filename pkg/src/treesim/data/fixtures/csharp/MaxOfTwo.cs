public class MaxOfTwo {
    public static int Max(int a, int b) {
        if (a > b) {
            return a;
        }
        return b;
    }
}
