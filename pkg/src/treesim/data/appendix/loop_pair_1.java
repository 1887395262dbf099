int result = 0;
        for(int i = 0; i < n; i++) {
            result = n * (7 * n - 5) / 2;        
}
        return result;
    }
}
